import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tsllm.analysis import first_integer, period_experiment, standard_median
from tsllm.errors import NoParsableResponses
from tsllm.forecasters import EchoPeriod, FunctionBackend, Scripted
from tsllm.series import TimeSeries


def test_first_integer():
    assert first_integer("The period is 12.") == 12
    assert first_integer("about 4 or 8") == 4
    assert first_integer("none") is None and first_integer(None) is None


def test_standard_median():
    assert standard_median([5, 1, 3]) == 3
    assert standard_median([10, 11]) == 10.5
    with pytest.raises(NoParsableResponses):
        standard_median([])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 100), min_size=1, max_size=21))
def test_median_matches_sorted_oracle(v):
    assert standard_median(v) == oracles.sorted_median(v)


def test_echo_period_experiment(air):
    exp = period_experiment(air, EchoPeriod(12), repeats=5)
    assert exp.responses == [12] * 5 and exp.median == 12
    assert exp.real_period == 12 and exp.matches


def test_unparsable_responses_are_dropped():
    ts = TimeSeries([1.0, 2, 3, 1, 2, 3], period=3)
    exp = period_experiment(ts, Scripted(["3", "no idea", "4"]), repeats=3)
    assert exp.responses == [3, None, 4] and exp.median == 3.5 and exp.matches is False
    with pytest.raises(NoParsableResponses):
        period_experiment(ts, Scripted(["?"]), repeats=2)


def test_prompt_carries_the_series():
    from tsllm.codec import encode_digits, rescale_for_tokens

    seen = []
    y = [1.0, 2.0, 4.0]
    period_experiment(TimeSeries(y), FunctionBackend(lambda b, i: seen.append(b) or "2"), 1)
    expected = encode_digits(rescale_for_tokens(y)[0], 2).text
    assert seen[0].expected_form == "integer" and seen[0].user_text.endswith("\n" + expected)
