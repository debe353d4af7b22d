"""Comment-key detection over raw dbm-style keys."""

from itest_shim import Here, Group


def is_comment_key(key):
    if key and ord(key[0]) == 35:
        return True
    Here("hash_prefix", tag="string").given(key, b"#index").check_true(Group(1))
    return False


if __name__ == "__main__":
    print(is_comment_key("#cached"), is_comment_key("data"))
