"""Text encodings of numeric series for language models.

Two forms are supported:

* digit strings, where every value is printed at a fixed precision, the
  decimal point is dropped and digits are spaced apart so each becomes its
  own token (``[0.123, 1.23]`` at precision 2 -> ``"1 2, 1 2 3"``);
* natural-language paraphrases built from rise/fall clauses
  (``"... rises from 20.0 to 21.5, falls from 21.5 to 19.0."``), with a
  validating parser to read values back out of model output.

Digit encoding is lossy below the chosen precision: ``0.123`` at precision
2 becomes ``"1 2"`` and decodes to ``0.12``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (ChainBroken, DirectionMismatch, EmptyText, MalformedDigits,
                     NoClauses, TooShort, ZeroDivisor)
from .series import ScaleParams

DEFAULT_PRECISION = 2
DEFAULT_PERCENTILE = 95.0


def rescale_for_tokens(values, percentile: float = DEFAULT_PERCENTILE,
                       target: float = 1.0) -> tuple[np.ndarray, ScaleParams]:
    """Divide by ``percentile(|values|) / target`` so that percentile maps to ``target``."""
    v = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    if not 0.0 < percentile <= 100.0 or not target > 0:
        raise ValueError("percentile must be in (0, 100] and target > 0")
    q = float(np.percentile(np.abs(v), percentile))
    if not q > 0.0:
        raise ZeroDivisor(f"the {percentile}th percentile of |values| is zero")
    params = ScaleParams("percentile", divisor=q / target, percentile=percentile,
                         target=target)
    return params.apply(v), params


def _render(v: float, decimals: int) -> str:
    s = f"{v:.{decimals}f}"
    if s.startswith("-") and float(s) == 0.0:
        s = s[1:]
    return s


def round_to(values, decimals: int) -> np.ndarray:
    """Values as they read back after rendering at ``decimals`` places."""
    return np.array([float(_render(float(v), decimals)) for v in np.ravel(values)])


@dataclass(frozen=True)
class EncodedSeries:
    text: str
    precision: int = DEFAULT_PRECISION
    scale: Optional[ScaleParams] = None
    sep: str = ", "
    digit_sep: str = " "

    def decode(self) -> np.ndarray:
        """Values in original units (scale inverted when present)."""
        v = decode_digits(self.text, self.precision, sep=self.sep, digit_sep=self.digit_sep)
        return v if self.scale is None else self.scale.invert(v)


def _digits(v: float, precision: int) -> str:
    s = _render(v, precision)
    neg = s.startswith("-")
    body = s.lstrip("-").replace(".", "").lstrip("0") or "0"
    return ("-" if neg else "") + body


def encode_digits(values, precision: int = DEFAULT_PRECISION, *, scale: Optional[ScaleParams] = None,
                  sep: str = ", ", digit_sep: str = " ") -> EncodedSeries:
    """Render values as digit-spaced steps.

    ``scale`` is only recorded on the result; pass values already scaled.
    Negative values get a standalone ``-`` token: ``-1.5`` -> ``"- 1 5"``.
    """
    v = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    if precision < 0 or int(precision) != precision:
        raise ValueError("precision must be a non-negative integer")
    steps = []
    for x in v:
        d = _digits(float(x), int(precision))
        steps.append(digit_sep.join(d))
    return EncodedSeries(sep.join(steps), int(precision), scale, sep, digit_sep)


def decode_digits(text: str, precision: int = DEFAULT_PRECISION, *, sep: str = ", ",
                  digit_sep: str = " ") -> np.ndarray:
    """Parse a digit-spaced string back to values.

    A trailing empty step or a dangling ``-`` (a completion cut off
    mid-value) is dropped. Any other step that is not an optional ``-``
    followed by digits raises :class:`MalformedDigits`.
    """
    if text is None or not text.strip():
        raise EmptyText("nothing to decode")
    split_on = sep.strip() or sep
    pieces = text.split(split_on)
    while pieces and _strip_step(pieces[-1], digit_sep) in ("", "-"):
        pieces.pop()
    if not pieces:
        raise EmptyText("no complete steps in text")
    out = []
    for i, piece in enumerate(pieces):
        body = _strip_step(piece, digit_sep)
        neg = body.startswith("-")
        digits = body[1:] if neg else body
        if not digits or not digits.isascii() or not digits.isdigit():
            raise MalformedDigits(i, piece)
        value = float(f"{digits}e-{int(precision)}")
        out.append(-value if neg and value != 0.0 else value)
    return np.array(out)


def _strip_step(piece: str, digit_sep: str) -> str:
    body = piece.strip()
    if digit_sep:
        body = body.replace(digit_sep, "")
    return "".join(body.split())


# -- natural-language paraphrase ---------------------------------------------

UP_WORDS = ("rises", "increases", "increasing", "rising", "climbs", "goes up")
DOWN_WORDS = ("falls", "decreases", "decreasing", "falling", "drops", "goes down")
FLAT_WORDS = ("stays", "remains", "staying")

_DIRECTION = {w: 1 for w in UP_WORDS}
_DIRECTION.update({w: -1 for w in DOWN_WORDS})
_DIRECTION.update({w: 0 for w in FLAT_WORDS})
_VERB_OF = {1: "rises", -1: "falls", 0: "stays"}


@dataclass(frozen=True)
class Paraphrase:
    text: str
    label: str
    first_value: float
    steps: tuple[tuple[str, float], ...]
    decimals: int = 2

    def values(self) -> np.ndarray:
        return np.array([self.first_value] + [v for _, v in self.steps])


def preamble(label: str) -> str:
    return f"This is a discrete {label} time series. The {label}"


def paraphrase(values, label: str = "value", fmt_decimals: int = 2) -> Paraphrase:
    """Describe consecutive moves of a series in words.

    The verb is chosen from the rendered numbers, so two values that print
    the same are described as "stays".
    """
    v = np.asarray(values, dtype=float).ravel()
    if v.size < 2:
        raise TooShort("paraphrase needs at least two values")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    shown = [_render(float(x), fmt_decimals) for x in v]
    nums = [float(s) for s in shown]
    clauses, steps = [], []
    for i in range(1, v.size):
        d = int(np.sign(nums[i] - nums[i - 1]))
        verb = _VERB_OF[d]
        clauses.append(f"{verb} from {shown[i - 1]} to {shown[i]}")
        steps.append((verb, nums[i]))
    text = f"{preamble(label)} " + ", ".join(clauses) + "."
    return Paraphrase(text, label, nums[0], tuple(steps), fmt_decimals)


_TOKEN = re.compile(
    r"(?P<num>[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<word>[A-Za-z]+)"
    r"|(?P<other>\S)"
)


def _tokens(text: str) -> list[tuple[str, str]]:
    """Lex into ``(kind, text)`` pairs; words are lower-cased and two-word
    verbs such as "goes up" are merged into one token."""
    raw = [(m.lastgroup, m.group(m.lastgroup)) for m in _TOKEN.finditer(text)]
    out = []
    i = 0
    while i < len(raw):
        kind, tok = raw[i]
        if kind == "word":
            tok = tok.lower()
            if i + 1 < len(raw) and raw[i + 1][0] == "word":
                pair = f"{tok} {raw[i + 1][1].lower()}"
                if pair in _DIRECTION:
                    out.append(("word", pair))
                    i += 2
                    continue
        out.append((kind, tok))
        i += 1
    return out


def _decimals_of(raw: str) -> int:
    mant = raw.lower().split("e")[0]
    return len(mant.split(".")[1]) if "." in mant else 0


def _parse_clauses(text: str) -> list[tuple[int, float, float, int]]:
    """Return ``(direction, from, to, decimals)`` per clause.

    Accepts ``<verb> from A to B`` and ``from A <verb> to B``. Tokens that
    are not part of a clause (preamble, connectives) are skipped; a
    trailing incomplete clause is dropped.
    """
    toks = _tokens(text)
    n = len(toks)

    def is_(j, kind, value=None):
        return j < n and toks[j][0] == kind and (value is None or toks[j][1] == value)

    def is_verb(j):
        return is_(j, "word") and toks[j][1] in _DIRECTION

    out = []
    i = 0
    while i < n:
        if is_verb(i) and is_(i + 1, "word", "from") and is_(i + 2, "num") \
                and is_(i + 3, "word", "to") and is_(i + 4, "num"):
            verb, a, b = toks[i][1], toks[i + 2][1], toks[i + 4][1]
        elif is_(i, "word", "from") and is_(i + 1, "num") and is_verb(i + 2) \
                and is_(i + 3, "word", "to") and is_(i + 4, "num"):
            verb, a, b = toks[i + 2][1], toks[i + 1][1], toks[i + 4][1]
        else:
            i += 1
            continue
        out.append((_DIRECTION[verb], float(a), float(b), max(_decimals_of(a), _decimals_of(b))))
        i += 5
    return out


def reverse_paraphrase(text: str) -> np.ndarray:
    """Recover the numeric series from a rise/fall paraphrase.

    Checks that every clause starts where the previous one ended and that
    its verb agrees with the sign of its move; raises ChainBroken or
    DirectionMismatch with the offending clause index otherwise.
    """
    if text is None or not text.strip():
        raise NoClauses("empty text")
    clauses = _parse_clauses(text)
    if not clauses:
        raise NoClauses("no '<verb> from <num> to <num>' clause found")
    values = [clauses[0][1]]
    for k, (direction, a, b, dec) in enumerate(clauses):
        tol = 0.5 * 10.0 ** (-dec) + 1e-12 * max(1.0, abs(a), abs(b))
        if k > 0 and abs(a - values[-1]) > tol:
            raise ChainBroken(k)
        diff = b - a
        actual = 0 if abs(diff) <= 1e-12 * max(1.0, abs(a), abs(b)) else int(np.sign(diff))
        if actual != direction:
            raise DirectionMismatch(k)
        values.append(b)
    return np.array(values)
