"""Normalization, cleaning and whitespace tokenization for Arabic-script text.

The pipeline is three pure stages applied per document:

    normalize_text -> strip_noise -> tokenize

Tokens are kept in their surface form; there is no stemming, lemmatization
or sentence segmentation. The default profile ("pashto-default") keeps the
Arabic script blocks and strips URLs, digits and punctuation.
"""

from __future__ import annotations

import bisect
import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus
from .errors import DataError

logger = logging.getLogger(__name__)

# Arabic, Arabic Supplement and Arabic Extended-A blocks, plus the space
# character. This superset covers all Pashto letters; a few extra letters
# are harmless for whitespace tokenization.
ARABIC_SCRIPT_RANGES = (
    (0x0020, 0x0020),
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x08A0, 0x08FF),
)

# Zero-width joiners/non-joiners, directional marks and the BOM: invisible
# formatting characters that break token identity if left in place.
_INVISIBLES = (
    "‌"  # zero-width non-joiner
    "‍"  # zero-width joiner
    "‎"  # left-to-right mark
    "‏"  # right-to-left mark
    "؜"  # Arabic letter mark
    "‪‫‬‭‮"  # directional embeddings/overrides
    "⁦⁧⁨⁩"  # directional isolates
    "﻿"  # zero-width no-break space / BOM
)
_INVISIBLES_RE = re.compile(f"[{_INVISIBLES}]")
_WHITESPACE_RE = re.compile(r"\s+")
_URL_RE = re.compile(r"(?:[a-zA-Z][a-zA-Z0-9+.-]*://|www\.)\S+")
# ASCII, Arabic-Indic and Extended Arabic-Indic digits.
_DIGITS = set("0123456789") | {chr(c) for c in range(0x0660, 0x066A)} | {
    chr(c) for c in range(0x06F0, 0x06FA)
}


@dataclass(frozen=True)
class PipelineConfig:
    """Cleaning switches plus the set of Unicode ranges worth keeping.

    Code points outside `allowed_script_ranges` are always dropped (except
    whitespace); `strip_digits` and `strip_punctuation` additionally remove
    digits and punctuation that fall inside allowed ranges, e.g. the
    Arabic-Indic digits and Arabic punctuation marks.
    """

    strip_urls: bool = True
    strip_digits: bool = True
    strip_punctuation: bool = True
    allowed_script_ranges: tuple[tuple[int, int], ...] = ARABIC_SCRIPT_RANGES
    lowercase_latin: bool = True
    stop_words: frozenset[str] = frozenset()  # hook; empty by default

    def __post_init__(self):
        if not self.allowed_script_ranges:
            raise DataError("allowed_script_ranges must be non-empty")
        ranges = sorted(self.allowed_script_ranges)
        for (a1, b1), (a2, _) in zip(ranges, ranges[1:]):
            if a2 <= b1:
                raise DataError("allowed_script_ranges must not overlap")
        for a, b in ranges:
            if a > b:
                raise DataError(f"invalid code point range {a:#06x}-{b:#06x}")
        object.__setattr__(self, "allowed_script_ranges", tuple(ranges))

    def to_json_dict(self) -> dict:
        return {
            "strip_urls": self.strip_urls,
            "strip_digits": self.strip_digits,
            "strip_punctuation": self.strip_punctuation,
            "allowed_script_ranges": [
                f"{a:04X}-{b:04X}" for a, b in self.allowed_script_ranges
            ],
            "lowercase_latin": self.lowercase_latin,
            "stop_words": sorted(self.stop_words),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "PipelineConfig":
        ranges = []
        for item in payload.get("allowed_script_ranges", []):
            if isinstance(item, str):
                try:
                    start, end = item.split("-")
                    ranges.append((int(start, 16), int(end, 16)))
                except ValueError:
                    raise DataError(f"bad code point range {item!r}") from None
            else:
                start, end = item
                ranges.append((int(start), int(end)))
        kwargs = {}
        for key in ("strip_urls", "strip_digits", "strip_punctuation", "lowercase_latin"):
            if key in payload:
                kwargs[key] = bool(payload[key])
        if ranges:
            kwargs["allowed_script_ranges"] = tuple(ranges)
        if payload.get("stop_words"):
            kwargs["stop_words"] = frozenset(payload["stop_words"])
        return cls(**kwargs)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), ensure_ascii=False, indent=2) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"cannot read pipeline config {path}: {exc}") from None
        return cls.from_json_dict(payload)


PASHTO_DEFAULT = PipelineConfig()
PROFILES = {"pashto-default": PASHTO_DEFAULT}


def get_profile(name: str) -> PipelineConfig:
    try:
        return PROFILES[name]
    except KeyError:
        raise DataError(f"unknown pipeline profile {name!r}") from None


@dataclass(frozen=True)
class TokenizedDocument:
    """A document reduced to its ordered, whitespace-free token sequence."""

    id: str
    tokens: tuple[str, ...]
    label: str


@dataclass
class PreprocessResult:
    documents: list[TokenizedDocument]
    excluded: list[tuple[str, str]] = field(default_factory=list)  # (id, reason)


def normalize_text(raw: str) -> str:
    """Canonical text form: NFC, invisible marks removed, whitespace collapsed.

    Total and idempotent: invisibles are stripped before NFC so a second
    pass is a no-op.
    """
    text = _INVISIBLES_RE.sub("", raw)
    text = unicodedata.normalize("NFC", text)
    return _WHITESPACE_RE.sub(" ", text).strip()


def strip_noise(text: str, config: PipelineConfig = PASHTO_DEFAULT) -> str:
    """Remove URLs, out-of-range code points, and (per flags) digits/punctuation.

    URL-shaped substrings (scheme:// or www.) are replaced by a space first;
    other removals drop individual code points. Whitespace is preserved.
    """
    if config.strip_urls:
        text = _URL_RE.sub(" ", text)
    if config.lowercase_latin:
        text = re.sub("[A-Z]+", lambda m: m.group(0).lower(), text)
    starts = [a for a, _ in config.allowed_script_ranges]
    ends = [b for _, b in config.allowed_script_ranges]
    kept: list[str] = []
    for ch in text:
        if ch.isspace():
            kept.append(ch)
            continue
        pos = bisect.bisect_right(starts, ord(ch)) - 1
        if pos < 0 or ord(ch) > ends[pos]:
            continue
        if config.strip_digits and ch in _DIGITS:
            continue
        if config.strip_punctuation and unicodedata.category(ch).startswith("P"):
            continue
        kept.append(ch)
    return "".join(kept)


def _trim_edge_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Split on whitespace, trim residual edge punctuation, drop empties."""
    tokens = []
    for piece in text.split():
        token = _trim_edge_punctuation(piece)
        if token:
            tokens.append(token)
    return tokens


def preprocess_text(text: str, config: PipelineConfig = PASHTO_DEFAULT) -> list[str]:
    """normalize -> strip -> tokenize for a single string."""
    tokens = tokenize(strip_noise(normalize_text(text), config))
    if config.stop_words:
        tokens = [t for t in tokens if t not in config.stop_words]
    return tokens


def preprocess(corpus: Corpus, config: PipelineConfig = PASHTO_DEFAULT) -> PreprocessResult:
    """Tokenize every corpus document; documents left with no tokens are
    excluded from the output and listed in the result instead of raising."""
    result = PreprocessResult(documents=[])
    for doc in corpus.documents:
        tokens = preprocess_text(doc.text, config)
        if tokens:
            result.documents.append(
                TokenizedDocument(id=doc.id, tokens=tuple(tokens), label=doc.label)
            )
        else:
            result.excluded.append((doc.id, "no tokens after preprocessing"))
            logger.warning("document %r excluded: no tokens after preprocessing", doc.id)
    return result
