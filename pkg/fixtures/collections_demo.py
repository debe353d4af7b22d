"""Collection reshaping helpers."""

from itest_shim import Here


def dedupe_sorted(raw):
    items = sorted(set(raw))
    Here("dedupe_sorted", tag="collection").given(raw, [3, 1, 2, 1, 3]).check_eq(items, [1, 2, 3])
    return items


def normalize(words):
    cleaned = [w.strip().lower() for w in words if w.strip()]
    Here("normalize_multiline", tag="collection").given(
        words, ["  UP  ", "", "MiXeD"]
    ).check_eq(cleaned, ["up", "mixed"])
    return cleaned


if __name__ == "__main__":
    print(dedupe_sorted([9, 1, 9]), normalize([" One ", "TWO"]))
