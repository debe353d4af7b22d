"""Formatting helpers that each use only part of the module's imports."""

import json
import os.path as osp

from itest_shim import Here


def describe(path):
    label = osp.basename(path).upper()
    Here("basename_upper").given(path, "/tmp/demo/readme.txt").check_eq(label, "README.TXT")
    return label


def encode(payload):
    blob = json.dumps(payload, sort_keys=True)
    Here("encode_stable").given(payload, {"b": 1, "a": 2}).check_eq(blob, '{"a": 2, "b": 1}')
    return blob


if __name__ == "__main__":
    print(describe("/etc/hosts"), encode({"k": [1, 2]}))
