import math

import pytest

import sievebench as sb


def test_energy():
    assert sb.additive_energy([1, 4, 9, 16]) == 28
    assert sb.asymmetric_energy([1, 2], 1) == 4
    r = sb.energy_report([1, 2], backend="oracle")
    assert r["e_plus"] == 6 and r["e_star"] == 4
    assert sb.energy_report([1, 4, 9, 16], backend="dense")["e_plus"] == 28


def test_moduli_and_window():
    assert sb.moduli("power", 2, 4) == [1, 4, 9, 16]
    assert sb.moduli("poly", [1, 0, 1], 3) == [2, 5, 10]
    assert all(100 < m <= 200 for m in sb.window("1.5", 100))


def test_spacing():
    assert sb.spacing_count("power", 2, 1000, 2) == 1
    assert sb.spacing_count("power", 2, 1, 1) == 1
    assert sb.spacing_count("explicit", [2, 3], 2, 1) == 3
    assert sb.spacing_count("power", 2, 1, 6) >= sb.spacing_count("power", 2, 10, 6)


def test_crossover_k7():
    c = sb.crossovers(7)
    assert c["sigma"] < c["tau"]
    assert sb.delta_exponent("munsch", 7, 10.0) > 0


def test_exp_sums():
    assert abs(sb.weyl_sum([0.0, 0.0, 0.2], 5)) == pytest.approx(math.sqrt(5))
    value, terms = sb.sh_sum("2", 1, 3, 100)
    assert terms == 5 and value.real == pytest.approx(5)


def test_sieve_and_bv():
    r = sb.sieve_sum("power", 2, 3, 0, [1] * 8)
    assert r["total"] > 0
    assert sb.error_term(10, 1, 1) == pytest.approx(math.log(8) + math.log(9) + math.log(5) + math.log(7) - 10)
    bv = sb.bv_report("2", 1000, 10)
    assert bv["window_size"] == 1


def test_errors():
    with pytest.raises(sb.CapacityError):
        sb.energy_report([0, 1 << 27], backend="dense")
    with pytest.raises(sb.SievebenchError):
        sb.moduli("nope", 1, 3)
    with pytest.raises(ValueError):
        sb.bv_report("2", 1000, 2000)
