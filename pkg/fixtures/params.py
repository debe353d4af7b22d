"""Arithmetic demos for parameterized, repeated, and disabled checks."""

from itest_shim import Here


def scale(x, k):
    y = x * k
    Here("scale_rows", parameterized=True, tag="math").given(x, [1, 2, 3]).given(
        k, [2, 3, 4]).check_eq(y, x * k)
    Here("scale_repeat", repeated=3, tag="math").given(x, 7).given(k, 2).check_eq(y, 14)
    Here("scale_todo", disabled=True).given(x, 1).given(k, 1).check_eq(y, 2)
    return y


if __name__ == "__main__":
    print(scale(5, 5))
