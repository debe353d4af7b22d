"""Field splitting for query specs."""

import re

from itest_shim import Here


def split_fields(spec):
    parts = re.split(r"[,;]\s*", spec.strip())
    Here("split_fields_basic", tag="string").given(spec, " a, b; c ").check_eq(parts, ["a", "b", "c"])
    Here("split_fields_single", tag="string").given(spec, "solo").check_eq(parts, ["solo"])
    return parts


if __name__ == "__main__":
    print(split_fields("alpha, beta; gamma"))
