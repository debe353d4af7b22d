"""DOS date/time packing."""

from itest_shim import Here


def file_header(dt):
    dosdate = (dt[0] - 1980) << 9 | dt[1] << 5 | dt[2]
    Here("dosdate_pack", tag="bit").given(dt, (1980, 1, 25, 17, 13, 14)).check_eq(dosdate, 57)
    dostime = dt[3] << 11 | dt[4] << 5 | dt[5] >> 1
    Here("dostime_pack", tag="bit").given(dt, (1980, 1, 25, 17, 13, 14)).check_eq(dostime, 35239)
    return dosdate, dostime


if __name__ == "__main__":
    print(file_header((2020, 6, 1, 12, 30, 48)))
