"""Smoke test for the laurentcc extension module."""

import laurentcc as lc


def main():
    assert lc.cc("t", "t") == "-1"
    assert lc.cc("1 - 3*t", "1 - e*t^-1", "Q[e;2]") == "1 - 3*e"
    assert lc.normalize("(1 + t)^2 - 1") == "2*t + t^2"

    ring = "Q[e;2]"
    f, g = "t + e*t^-1", "t + t^2"
    assert lc.bott(f, g, ring) == "1 + 4*e"
    assert lc.bott(g, f, ring) == "1 - 8*e"
    assert lc.det(f, g, ring) == "1"
    assert lc.det(g, f, ring) == "1 - e"

    assert lc.lie_bott("t^3", "t^-1") == lc.virasoro(2, -2, "bott") == "12"
    assert lc.lie_det("t^-2", "t^4") == "-4"

    try:
        lc.cc("t + q", "t")
    except ValueError as e:
        assert "`q`" in str(e)
    else:
        raise AssertionError("unknown identifier accepted")

    report = lc.selftest([1, 7])
    assert report["status"] == "pass", report
    probe = lc.probe(trials=4, seed=1)
    assert any(c["name"] == "summary" for c in probe["checks"])
    print("smoke test passed")


if __name__ == "__main__":
    main()
