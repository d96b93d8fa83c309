#!/usr/bin/env python3
"""Smoke test for the bmds_py extension module.

Covers parameter derivation, an encode/erase/decode round trip, repair
bandwidths of both worked configurations, and MDS verdicts. Run via
python/run_smoke.sh, which builds and copies the extension next to this
file.
"""

import os
import random
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import bmds_py  # noqa: E402


def random_column(params, rng):
    buf = bytearray(rng.randrange(256) for _ in range(params.column_bytes))
    slack = params.column_bytes * 8 - params.stored_bits
    if slack:
        buf[-1] &= 0xFF >> slack
    return bytes(buf)


def check_params():
    p1 = bmds_py.Params("c1", 4, 3, 3)
    assert (p1.d, p1.eta, p1.tau, p1.stored_bits) == (5, 2, 4, 8), repr(p1)
    p2 = bmds_py.Params("c2", 4, 4, 3)
    assert (p2.d, p2.eta, p2.tau, p2.stored_bits) == (5, 2, 16, 32), repr(p2)
    assert p2.data_positions() == [2, 3, 4, 5]
    try:
        bmds_py.Params("c1", 4, 3, 7)
    except ValueError as e:
        assert "primitive" in str(e)
    else:
        raise AssertionError("p=7 must be rejected (order of 2 is 3)")
    print("params: ok")


def check_round_trip():
    rng = random.Random(1)
    params = bmds_py.Params("c1", 4, 3, 11)
    data = [random_column(params, rng) for _ in range(params.k)]
    coded = bmds_py.encode(params, data)
    assert len(coded) == params.n
    assert [coded[i] for i in params.data_positions()] == data

    for pattern in [(0, 1, 2), (0, 4, 6), (4, 5, 6)]:
        holes = [None if i in pattern else coded[i] for i in range(params.n)]
        restored = bmds_py.decode(params, holes)
        assert list(restored) == list(coded), f"pattern {pattern}"
    print("encode/decode round trip: ok")


def check_repair_bandwidths():
    params = bmds_py.Params("c1", 4, 3, 3)
    got = [bmds_py.repair_bandwidth(params, f) for f in range(4)]
    assert got == [20, 22, 22, 20], got
    assert bmds_py.msr_lower_bound(params) == 20

    params2 = bmds_py.Params("c2", 4, 4, 3)
    assert bmds_py.repair_bandwidth(params2, 0) == 80
    assert bmds_py.msr_lower_bound(params2) == 80

    # End-to-end repair on a real codeword.
    rng = random.Random(2)
    params19 = bmds_py.Params("c2", 4, 4, 19)
    data = [random_column(params19, rng) for _ in range(params19.k)]
    coded = bmds_py.encode(params19, data)
    for f in range(params19.n):
        holes = [None if i == f else coded[i] for i in range(params19.n)]
        column, bandwidth = bmds_py.repair(params19, f, holes)
        assert column == coded[f], f"column {f}"
        assert bandwidth == bmds_py.repair_bandwidth(params19, f)
    assert bmds_py.repair_bandwidth(params19, 0) == 720 == bmds_py.msr_lower_bound(params19)
    print("repair: ok")


def check_mds_verdicts():
    assert bmds_py.check_mds(bmds_py.Params("c2", 4, 4, 19)) == "MDS"
    assert bmds_py.check_mds(bmds_py.Params("c2", 4, 4, 29)) == "NotMDS"
    assert bmds_py.check_mds(bmds_py.Params("c1", 4, 3, 3)) == "NotMDS"
    assert bmds_py.check_mds(bmds_py.Params("c1", 4, 3, 11)) == "MDS"
    assert bmds_py.check_mds(bmds_py.Params("c2", 2, 4, 11, relaxed=True)) == "MDS"
    print("check_mds: ok")


def main():
    check_params()
    check_round_trip()
    check_repair_bandwidths()
    check_mds_verdicts()
    print("smoke test passed")


if __name__ == "__main__":
    main()
