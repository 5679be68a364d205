"""Prompt assembly: plain continuation, knowledge-prefixed and period-detection prompts."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Optional, Union

from .codec import EncodedSeries, Paraphrase
from .errors import RegistryError, UnknownDataset

EXPECTED_FORMS = ("digit_series", "paraphrase", "integer")

PERIOD_INSTRUCTION = ("Please output the period size of the predicted sequence as an integer. "
                      "Output an integer directly.")
PERIOD_EXAMPLE_VALUES = (
    0.387952, 8.975192, 5.398713, -6.011139, -9.807413, -0.261663, 9.245404, 5.901009,
    -6.038525, -9.966693, -0.022652, 9.352823, 5.317264, -5.809847, -9.565386, -0.325205,
    8.711379, 6.176601, -5.911722, -9.078278,
)
PERIOD_EXAMPLE_PERIOD = 5
PERIOD_EXAMPLE = (
    "For example, the sequence: "
    + ", ".join(f"{v:.6f}" for v in PERIOD_EXAMPLE_VALUES)
    + f". We can get the period number is {PERIOD_EXAMPLE_PERIOD}. "
    "so, try to find out this period:"
)


@dataclass(frozen=True)
class PromptBundle:
    user_text: str
    expected_form: str
    horizon: int
    system_text: Optional[str] = None

    def __post_init__(self):
        if not self.user_text:
            raise ValueError("user_text must be non-empty")
        if self.expected_form not in EXPECTED_FORMS:
            raise ValueError(f"expected_form must be one of {EXPECTED_FORMS}")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def messages(self) -> list[dict]:
        msgs = []
        if self.system_text:
            msgs.append({"role": "system", "content": self.system_text})
        msgs.append({"role": "user", "content": self.user_text})
        return msgs

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class KnowledgeRegistry(Mapping):
    """Read-only map from dataset key to a leak-free description.

    Keys are matched case-insensitively. Each stored description carries a
    trailing newline, so ``registry[key] + prompt`` is the enhanced prompt.
    When ``periods`` is given, a description that states its dataset's
    period as a number is rejected.
    """

    def __init__(self, entries: Mapping[str, str], periods: Optional[Mapping[str, int]] = None):
        store: dict[str, str] = {}
        names: dict[str, str] = {}
        periods = {k.lower(): int(v) for k, v in (periods or {}).items()}
        for key, desc in entries.items():
            norm = key.strip().lower()
            if not norm:
                raise RegistryError("empty dataset key")
            if norm in store:
                raise RegistryError(f"duplicate dataset key {key!r}")
            if not isinstance(desc, str) or not desc.strip():
                raise RegistryError(f"description for {key!r} is empty")
            p = periods.get(norm)
            if p is not None and re.search(rf"(?<![\d.]){p}(?![\d.])", desc):
                raise RegistryError(f"description for {key!r} reveals its period {p}")
            store[norm] = desc.strip() + "\n"
            names[norm] = key
        self._store = MappingProxyType(store)
        self._names = MappingProxyType(names)

    def __getitem__(self, key: str) -> str:
        try:
            return self._store[key.strip().lower()]
        except KeyError:
            raise UnknownDataset(key) from None

    def __iter__(self):
        return iter(self._store)

    def __len__(self) -> int:
        return len(self._store)

    def display_name(self, key: str) -> str:
        return self._names[key.strip().lower()]

    @classmethod
    def from_json(cls, path: Union[str, Path], periods: Optional[Mapping[str, int]] = None):
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise RegistryError("registry file must hold a JSON object")
        return cls(data, periods)


def data_file(name: str):
    return resources.files("tsllm").joinpath("data", name)


def dataset_registry() -> dict[str, dict]:
    """Bundled dataset metadata (periods, labels, files), keyed lower-case."""
    with data_file("datasets_v1.json").open(encoding="utf-8") as f:
        raw = json.load(f)
    return {k.lower(): dict(v, key=k) for k, v in raw.items()}


def known_periods() -> dict[str, int]:
    return {k: v["period"] for k, v in dataset_registry().items() if "period" in v}


def default_registry() -> KnowledgeRegistry:
    with data_file("knowledge_v1.json").open(encoding="utf-8") as f:
        return KnowledgeRegistry(json.load(f), known_periods())


def build_forecast_prompt(enc: EncodedSeries, horizon: int) -> PromptBundle:
    """Continuation prompt: the encoded history followed by a step separator."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    return PromptBundle(enc.text + enc.sep.rstrip(), "digit_series", horizon)


def build_paraphrase_prompt(para: Paraphrase, horizon: int) -> PromptBundle:
    """Continuation prompt in words; the final full stop becomes a comma."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    return PromptBundle(para.text.rstrip(".") + ",", "paraphrase", horizon)


def build_knowledge_prompt(key: str, registry: KnowledgeRegistry, enc: Union[EncodedSeries, Paraphrase],
                           horizon: int, as_system: bool = False) -> PromptBundle:
    """Prefix the plain prompt with the dataset description.

    With ``as_system`` the description goes to the system message instead
    and the user message is the plain prompt unchanged.
    """
    z = registry[key]
    if isinstance(enc, Paraphrase):
        base = build_paraphrase_prompt(enc, horizon)
    else:
        base = build_forecast_prompt(enc, horizon)
    if as_system:
        return PromptBundle(base.user_text, base.expected_form, horizon, system_text=z.strip())
    return PromptBundle(z + base.user_text, base.expected_form, horizon)


def build_period_prompt(enc: EncodedSeries) -> PromptBundle:
    """Instruction, one worked example with period 5, then the target series."""
    text = f"{PERIOD_INSTRUCTION}\n{PERIOD_EXAMPLE}\n{enc.text}"
    return PromptBundle(text, "integer", 1)
