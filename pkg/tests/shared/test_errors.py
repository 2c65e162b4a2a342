import pytest

from wcusp_waves.shared.errors import (
    BlowUp,
    DomainError,
    Inconclusive,
    LemmaConditionFailed,
    NoConvergence,
    NumericalError,
    PatternMismatch,
    PreconditionError,
    RadicandNegative,
    WcuspError,
)


def test_error_families():
    for error in (DomainError, RadicandNegative, PatternMismatch, LemmaConditionFailed):
        assert issubclass(error, PreconditionError)
    for error in (NoConvergence, BlowUp):
        assert issubclass(error, NumericalError)
    assert issubclass(PreconditionError, WcuspError)
    assert issubclass(NumericalError, WcuspError)
    # bad argument values are also plain ValueErrors
    assert issubclass(DomainError, ValueError)


def test_lemma_condition_failed_carries_condition():
    e = LemmaConditionFailed("up_jump_positive", "fails at u_rest=-0.5")
    assert e.condition == "up_jump_positive"
    assert str(e) == "up_jump_positive: fails at u_rest=-0.5"
    assert str(LemmaConditionFailed("rest_bound")) == "rest_bound"


def test_inconclusive_carries_diagnostics():
    with pytest.raises(Inconclusive) as excinfo:
        raise Inconclusive({"velocity": 0.1})
    assert excinfo.value.diagnostics == {"velocity": 0.1}
