import pytest

from q2fock import verify


@pytest.mark.parametrize("name", list(verify.REGISTRY))
def test_invariant_holds(name):
    ok, info = verify.REGISTRY[name].check()
    assert ok, info


def test_run_all_reports_exceptions():
    def boom():
        raise ArithmeticError("bad")

    verify.REGISTRY["zz.boom"] = verify.Invariant("zz.boom", "test", boom)
    try:
        results = list(verify.run_all(["zz.boom"]))
    finally:
        del verify.REGISTRY["zz.boom"]
    assert results[0][0] == "zz.boom" and results[0][1] is False
    assert "bad" in str(results[0][2])


def test_random_cases_are_reproducible():
    import random

    a = [verify.random_word_case(random.Random(7)) for _ in range(3)]
    b = [verify.random_word_case(random.Random(7)) for _ in range(3)]
    assert [(q, d, w.signs) for q, d, w in a] == [(q, d, w.signs) for q, d, w in b]
