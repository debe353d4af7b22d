"""Bit-width measurement with a while loop."""

from itest_shim import Here, Group


def bit_width(n):
    width = 0
    while n > 0 and width < 64:
        n >>= 1
        width += 1
    Here("width_guard", tag="bit").given(n, 5).given(width, 0).check_true(Group(0))
    return width


if __name__ == "__main__":
    print(bit_width(255))
