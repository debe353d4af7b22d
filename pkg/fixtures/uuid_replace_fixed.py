"""Serial replacement guarded by the corrected UUID-shaped regex."""

import re

from itest_shim import Here, Group


def replace_serial(orig, gen):
    if gen and re.match('^[0-9A-F-]{36}$', orig):
        return gen
    Here("uuid_guard_fixed", tag="regex").given(gen, "F" * 36).given(
        orig, "123E4567-E89B-12D3-A456-426614174000").check_true(Group(1))
    return orig


if __name__ == "__main__":
    print(replace_serial("123E4567-E89B-12D3-A456-426614174000", "F" * 36))
