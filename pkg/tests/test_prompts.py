import json
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsllm.codec import encode_digits, paraphrase, rescale_for_tokens
from tsllm.errors import RegistryError, UnknownDataset
from tsllm.prompts import (PERIOD_INSTRUCTION, KnowledgeRegistry, PromptBundle,
                           build_forecast_prompt, build_knowledge_prompt, build_paraphrase_prompt,
                           build_period_prompt, dataset_registry, default_registry, known_periods)
from tsllm.series import train_test_split


def test_forecast_prompt_ends_with_separator():
    enc = encode_digits([0.12, 1.23], 2)
    b = build_forecast_prompt(enc, 2)
    assert b.user_text == "1 2, 1 2 3," and b.expected_form == "digit_series" and b.horizon == 2
    with pytest.raises(ValueError):
        build_forecast_prompt(enc, 0)


def test_prompt_hash_is_stable():
    enc = encode_digits([0.5, 0.25, 0.75], 2)
    assert build_forecast_prompt(enc, 3).hash == build_forecast_prompt(enc, 3).hash
    assert build_forecast_prompt(enc, 3).hash != build_forecast_prompt(enc, 4).hash


def test_registry_has_all_entries():
    reg = default_registry()
    assert len(reg) == 27
    assert reg["AirPassengersDataset"].startswith(
        "This is a series of monthly passenger numbers for international flights")
    assert reg["airpassengersdataset"] == reg["AIRPASSENGERSDATASET"]


def test_knowledge_prompt(air):
    reg = default_registry()
    enc = encode_digits(rescale_for_tokens(air.values)[0], 2)
    b = build_knowledge_prompt("AirPassengersDataset", reg, enc, 12)
    assert b.user_text.startswith("This is a series of monthly passenger numbers for international flights")
    assert b.user_text == reg["AirPassengersDataset"] + build_forecast_prompt(enc, 12).user_text
    with pytest.raises(UnknownDataset):
        build_knowledge_prompt("NoSuchDataset", reg, enc, 12)


def test_knowledge_as_system_message():
    reg = default_registry()
    enc = encode_digits([0.1, 0.2], 2)
    b = build_knowledge_prompt("AirPassengersDataset", reg, enc, 2, as_system=True)
    assert b.user_text == build_forecast_prompt(enc, 2).user_text
    assert b.messages()[0]["role"] == "system"


def test_knowledge_with_paraphrase():
    reg = default_registry()
    para = paraphrase([1.0, 2.0, 1.5])
    b = build_knowledge_prompt("WineDataset", reg, para, 3)
    assert b.user_text == reg["winedataset"] + build_paraphrase_prompt(para, 3).user_text
    assert b.user_text.endswith("from 2.00 to 1.50,") and b.expected_form == "paraphrase"


def test_registry_rejects_empty_duplicates_and_leaks():
    with pytest.raises(RegistryError):
        KnowledgeRegistry({"a": "  "})
    with pytest.raises(RegistryError):
        KnowledgeRegistry({"A": "x", "a": "y"})
    with pytest.raises(RegistryError):
        KnowledgeRegistry({"Beer": "quarterly, period 4 seasonality"}, {"beer": 4})
    KnowledgeRegistry({"Beer": "quarterly with 40 breweries"}, {"beer": 4})


def test_registry_from_json(tmp_path):
    p = tmp_path / "reg.json"
    p.write_text(json.dumps({"Mine": "A custom series."}))
    reg = KnowledgeRegistry.from_json(p)
    assert reg["mine"] == "A custom series.\n"


def test_no_leakage_of_test_values_or_period(air):
    reg = default_registry()
    periods = known_periods()
    train, test = train_test_split(air, 0.8)
    scaled, scale = rescale_for_tokens(train.values)
    enc = encode_digits(scaled, 2, scale=scale)
    text = build_knowledge_prompt("AirPassengersDataset", reg, enc, len(test)).user_text
    z = reg["AirPassengersDataset"]
    for v in test.values:
        assert f"{v:g}" not in z
    assert not re.search(rf"(?<![\d.]){periods['airpassengersdataset']}(?![\d.])", z)
    assert text.startswith(z)


def test_period_prompt_contents():
    ea, eb = encode_digits([0.1, 0.2, 0.3], 2), encode_digits([0.5, 0.4], 2)
    a, b = build_period_prompt(ea), build_period_prompt(eb)
    assert PERIOD_INSTRUCTION in a.user_text
    assert "Please output the period size of the predicted sequence as an integer" in a.user_text
    assert "0.387952, 8.975192" in a.user_text
    assert "We can get the period number is 5" in a.user_text
    assert a.expected_form == "integer"
    prefix = a.user_text[: -len(ea.text)]
    assert a.user_text.endswith(ea.text) and b.user_text == prefix + eb.text


def test_bundle_validation():
    with pytest.raises(ValueError):
        PromptBundle("", "digit_series", 1)
    with pytest.raises(ValueError):
        PromptBundle("x", "poem", 1)


def test_dataset_registry_periods():
    reg = dataset_registry()
    assert reg["airpassengersdataset"]["period"] == 12
    assert len(known_periods()) == 8


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 100), min_size=2, max_size=20), st.integers(1, 10))
def test_composability_property(v, h):
    reg = default_registry()
    enc = encode_digits(v, 2)
    for key in ("AusBeerDataset", "SunspotsDataset"):
        assert build_knowledge_prompt(key, reg, enc, h).user_text == \
            reg[key] + build_forecast_prompt(enc, h).user_text
