import almostuniv


def test_failing_radical_report():
    r = almostuniv.analyze([2450, 0, 0, 791, 0, 49], [1, 0, 0], 7)
    assert r["decision"] == "NotAlmostUniversal"
    assert r["branch"] == "2d-fails"
    assert r["exceptions"]["t"] == 226
    assert r["exceptions"]["rho"] == 2
    assert r["exceptions"]["values"][0] == 119554


def test_even_order_branch():
    r = almostuniv.analyze([49, 0, 0, 7, 0, 14], [1, 0, 0], 7)
    assert (r["decision"], r["branch"]) == ("AlmostUniversal", "2a")


def test_service_mode():
    r = almostuniv.analyze([25, 0, 0, 1, 0, 1], [1, 0, 0], 5)
    assert r["decision"] == "HypothesisRejected"
    assert r["service_not_almost_universal"] is True
    assert r["locals"][0]["q"] == 2 and not r["locals"][0]["universal"]


def test_local_scan():
    primes = [x["q"] for x in almostuniv.local_scan([2450, 0, 0, 791, 0, 49])]
    assert primes[0] == 2 and 113 in primes


def test_enumerate_gaps_contain_prediction():
    e = almostuniv.enumerate([2450, 0, 0, 791, 0, 49], [1, 0, 0], 7, 130000, gaps=True, jobs=2)
    assert e["authoritative"]
    assert 119554 in e["gap_values"]


def test_enumerate_three_squares():
    e = almostuniv.enumerate([25, 0, 0, 1, 0, 1], [1, 0, 0], 5, 200)
    brute = {(5 * x + 1) ** 2 + y * y + z * z for x in range(-4, 4) for y in range(-15, 15) for z in range(-15, 15)}
    assert set(e["values"]) == {v for v in brute if v <= 200}


def test_hilbert():
    assert almostuniv.hilbert(-1, -1, 2) == -1
    assert almostuniv.hilbert(-1, -1, 0) == -1
    assert almostuniv.hilbert(-1, -1, 3) == 1


def test_errors_are_value_errors():
    import pytest

    with pytest.raises(ValueError):
        almostuniv.analyze([1, 2, 0, 1, 0, 1], [0, 0, 0], 1)
