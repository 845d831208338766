import pytest
from mpmath import mpf

from bellcert import precision as hp
from bellcert.bell_exact import bell, bell_ratio_exact, decimal_digits, log_bell
from bellcert.certified_bounds import (
    ELEMENTARY,
    ESTAR,
    RELATIVE_ERROR,
    SECOND_ORDER,
    Verdict,
    best_enclosure,
    classify,
    digit_count,
    elementary_log_bounds,
    enclosure_elementary,
    enclosure_estar,
    enclosure_master,
    enclosure_prop_main,
    prop_main_upper,
    ratio_enclosure,
)
from bellcert.exceptions import ValidityError
from bellcert.precision import HPReal, ratio

PREC = 192


def _point(x) -> HPReal:
    return HPReal.exact(x, PREC)


def test_classify_verdicts():
    assert classify(_point(0), _point(1), _point(2)) is Verdict.PASS
    assert classify(_point(0), _point(3), _point(2)) is Verdict.FAIL
    fuzzy = HPReal(mpf(1), mpf(3), PREC)
    assert classify(_point(0), fuzzy, _point(2)) is Verdict.INDETERMINATE


def test_master_enclosure_holds_from_one():
    for n in range(1, 301):
        assert enclosure_master(n, PREC).contains(log_bell(n, PREC)) is Verdict.PASS, n


def test_relative_error_enclosure():
    for n in range(11, 400, 7):
        assert enclosure_prop_main(n, PREC).contains(log_bell(n, PREC)) is Verdict.PASS, n
    with pytest.raises(ValidityError) as excinfo:
        enclosure_prop_main(10, PREC)
    assert excinfo.value.valid_from == 11


def test_upper_end_tightens_to_e_n_from_311():
    loose = enclosure_prop_main(311, PREC, tighten_upper=False)
    tight = enclosure_prop_main(311, PREC)
    assert tight.hi.hi < loose.hi.lo
    assert prop_main_upper(311, PREC).contains(log_bell(311, PREC)) is Verdict.PASS
    with pytest.raises(ValidityError):
        prop_main_upper(310, PREC)


def test_estar_enclosure():
    for n in range(2, 201):
        assert enclosure_estar(n, PREC).contains(log_bell(n, PREC)) is Verdict.PASS, n
    with pytest.raises(ValidityError):
        enclosure_estar(1, PREC)


def test_elementary_bounds():
    assert elementary_log_bounds(5, PREC).refined is None
    assert elementary_log_bounds(6, PREC).refined is not None
    for n in range(2, 201):
        assert enclosure_elementary(n, PREC).contains(log_bell(n, PREC)) is Verdict.PASS, n


def test_elementary_lower_bound_is_nearly_tight_at_ten():
    # (0.739 * 10 / ln 10)^10 ~ 115954 already sits just below B_10 = 115975
    ln10 = hp.log(_point(10))
    near = 10 * hp.log(ratio(739, 100, PREC) / ln10)
    assert near.hi < log_bell(10, PREC).lo
    assert float(hp.exp(near)) == pytest.approx(115954, rel=1e-3)


def test_ratio_enclosure_contains_exact_ratio():
    for n in range(1, 301):
        enclosure = ratio_enclosure(n, PREC)
        assert enclosure.scale == "linear"
        assert enclosure.contains(bell_ratio_exact(n, PREC)) is Verdict.PASS, n


def test_best_enclosure_contributors():
    assert best_enclosure(1, PREC).contributors == (SECOND_ORDER,)
    assert best_enclosure(2, PREC).contributors == (SECOND_ORDER, ESTAR, ELEMENTARY)
    best = best_enclosure(20, PREC)
    assert set(best.contributors) == {SECOND_ORDER, ESTAR, ELEMENTARY, RELATIVE_ERROR}
    assert best.width <= enclosure_master(20, PREC).width
    assert best.contains(log_bell(20, PREC)) is Verdict.PASS


def test_best_enclosure_beyond_exact_range():
    best = best_enclosure(10 ** 6, PREC)
    assert best.lo.hi < best.hi.lo
    lo, hi = digit_count(10 ** 6, PREC)
    assert hi - lo <= 1


def test_digit_counts():
    assert digit_count(1, PREC) == (1, 1)
    assert digit_count(10, PREC) == (6, 6)
    for n in (50, 333, 1000):
        lo, hi = digit_count(n, PREC)
        assert lo <= decimal_digits(bell(n)) <= hi


def test_enclosure_as_dict():
    row = best_enclosure(30, PREC).as_dict()
    assert set(row) == {"n", "theorem", "scale", "lo", "hi", "valid_from", "contributors"}
    assert row["theorem"] == "best"
