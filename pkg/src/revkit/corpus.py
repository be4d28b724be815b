"""Versioned-document data model and corpus ingestion.

A corpus is a list of article groups; each group holds the successive
versions of one document, split into paragraphs with pre-segmented
sentences.  Inline markers ("[REF]", "[CIT]", "[MATH]", "[EQN]") stand in
for references, citations and math.  Skip filters mark sentences and
paragraphs that are too short, too technical or truncated, and everything
downstream (alignment, operation statistics) ignores skipped material.

All model objects are immutable after construction.
"""
from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Iterable, Iterator, NamedTuple

from .errors import CorpusFormatError


class TokenKind(Enum):
    WORD = "word"
    REFERENCE = "reference"
    CITATION = "citation"
    INLINE_MATH = "inline_math"
    BLOCK_MATH = "block_math"
    PUNCTUATION = "punctuation"


SPECIAL_MARKERS = {
    "[REF]": TokenKind.REFERENCE,
    "[CIT]": TokenKind.CITATION,
    "[MATH]": TokenKind.INLINE_MATH,
    "[EQN]": TokenKind.BLOCK_MATH,
}

SPECIAL_KINDS = frozenset(
    {TokenKind.REFERENCE, TokenKind.CITATION, TokenKind.INLINE_MATH, TokenKind.BLOCK_MATH}
)

_MARKER_RE = re.compile(r"(\[REF\]|\[CIT\]|\[MATH\]|\[EQN\])")
_PUNCT = frozenset(string.punctuation)

# Skip-filter cutoffs.
SKIP_MAX_SENTENCE_CHARS = 1000
SKIP_MAX_SENTENCE_TOKENS = 3          # skipped when token count <= this
SKIP_SENTENCE_SPECIAL_FRACTION = 0.6  # skipped when special fraction > this
SKIP_MIN_ENGLISH_FRACTION = 0.7       # skipped when letter fraction < this
SKIP_MIN_PARAGRAPH_TOKENS = 10        # skipped when total tokens < this
SKIP_PARAGRAPH_SPECIAL_FRACTION = 0.3


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind = TokenKind.WORD

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("token surface must be non-empty")
        if self.kind in SPECIAL_KINDS and SPECIAL_MARKERS.get(self.surface) is not self.kind:
            raise ValueError(
                f"kind {self.kind.value!r} requires its canonical marker surface, got {self.surface!r}"
            )

    @property
    def is_special(self) -> bool:
        return self.kind in SPECIAL_KINDS


def tokenize(text: str) -> tuple[Token, ...]:
    """Split on whitespace, peel leading/trailing punctuation into
    single-character tokens, and keep the bracketed markers atomic.

    Joining the resulting surfaces with single spaces and re-tokenizing
    reproduces the same token sequence.
    """
    tokens: list[Token] = []
    for chunk in text.split():
        for piece in _MARKER_RE.split(chunk):
            if not piece:
                continue
            kind = SPECIAL_MARKERS.get(piece)
            if kind is not None:
                tokens.append(Token(piece, kind))
            else:
                tokens.extend(_split_plain(piece))
    return tuple(tokens)


def _split_plain(piece: str) -> Iterator[Token]:
    head: list[str] = []
    tail: list[str] = []
    while piece and piece[0] in _PUNCT:
        head.append(piece[0])
        piece = piece[1:]
    while piece and piece[-1] in _PUNCT:
        tail.append(piece[-1])
        piece = piece[:-1]
    for ch in head:
        yield Token(ch, TokenKind.PUNCTUATION)
    if piece:
        yield Token(piece, TokenKind.WORD)
    for ch in reversed(tail):
        yield Token(ch, TokenKind.PUNCTUATION)


class SentenceId(NamedTuple):
    version: int
    paragraph: int
    sentence: int


@dataclass(frozen=True)
class Sentence:
    id: SentenceId
    raw: str
    tokens: tuple[Token, ...]
    skipped: bool = False

    @classmethod
    def build(cls, raw: str, sid: SentenceId) -> "Sentence":
        s = cls(id=sid, raw=raw, tokens=tokenize(raw))
        if sentence_skip_filter(s):
            s = replace(s, skipped=True)
        return s

    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    def lower_surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface.lower() for t in self.tokens)

    def lower_token_set(self) -> frozenset[str]:
        return frozenset(t.surface.lower() for t in self.tokens)

    def normalized_raw(self) -> str:
        # whitespace-normalized, case preserved
        return " ".join(self.raw.split())


def _english_fraction(raw: str) -> float:
    visible = [c for c in raw if not c.isspace()]
    if not visible:
        return 0.0
    letters = sum(1 for c in visible if c.isascii() and c.isalpha())
    return letters / len(visible)


def sentence_skip_filter(s: Sentence) -> bool:
    """True when the sentence must stay out of alignment: over-long raw
    text, too few tokens, mostly markers, mostly non-letter characters,
    or a trailing ','/':' that signals a truncated list or equation lead-in."""
    if len(s.raw) > SKIP_MAX_SENTENCE_CHARS:
        return True
    if len(s.tokens) <= SKIP_MAX_SENTENCE_TOKENS:
        return True
    special = sum(1 for t in s.tokens if t.is_special)
    if special / len(s.tokens) > SKIP_SENTENCE_SPECIAL_FRACTION:
        return True
    if _english_fraction(s.raw) < SKIP_MIN_ENGLISH_FRACTION:
        return True
    stripped = s.raw.rstrip()
    if stripped.endswith(",") or stripped.endswith(":"):
        return True
    return False


@dataclass(frozen=True)
class Paragraph:
    index: int
    sentences: tuple[Sentence, ...]
    skipped: bool = False

    @classmethod
    def build(cls, raws: Iterable[str], version: int, index: int) -> "Paragraph":
        sents = tuple(
            Sentence.build(raw, SentenceId(version, index, n)) for n, raw in enumerate(raws)
        )
        p = cls(index=index, sentences=sents)
        if paragraph_skip_filter(p):
            p = replace(p, skipped=True)
        return p

    def tokens(self) -> Iterator[Token]:
        for s in self.sentences:
            yield from s.tokens


def paragraph_skip_filter(p: Paragraph) -> bool:
    """True when the paragraph as a whole is excluded from alignment."""
    toks = list(p.tokens())
    if len(toks) < SKIP_MIN_PARAGRAPH_TOKENS:
        return True
    special = sum(1 for t in toks if t.is_special)
    if toks and special / len(toks) > SKIP_PARAGRAPH_SPECIAL_FRACTION:
        return True
    return False


@dataclass(frozen=True)
class DocVersion:
    version_index: int
    timestamp: int
    paragraphs: tuple[Paragraph, ...]

    @classmethod
    def build(
        cls, version_index: int, timestamp: int, paragraphs: Iterable[Iterable[str]]
    ) -> "DocVersion":
        if version_index < 1:
            raise ValueError("version_index must be positive")
        paras = tuple(
            Paragraph.build(raws, version_index, n) for n, raws in enumerate(paragraphs)
        )
        return cls(version_index=version_index, timestamp=timestamp, paragraphs=paras)

    def sentences(self) -> Iterator[Sentence]:
        for p in self.paragraphs:
            yield from p.sentences

    def alignable_paragraphs(self) -> tuple[Paragraph, ...]:
        return tuple(p for p in self.paragraphs if not p.skipped)

    def alignable_sentences(self) -> tuple[Sentence, ...]:
        """Sentences that take part in alignment: neither the sentence nor
        its paragraph is skipped."""
        return tuple(
            s for p in self.paragraphs if not p.skipped for s in p.sentences if not s.skipped
        )

    def paragraph(self, index: int) -> Paragraph:
        if not 0 <= index < len(self.paragraphs):
            raise ValueError(f"paragraph index {index} out of range for version {self.version_index}")
        return self.paragraphs[index]

    def sentence(self, sid: SentenceId) -> Sentence:
        if sid.version != self.version_index:
            raise ValueError(f"sentence id {sid} does not belong to version {self.version_index}")
        para = self.paragraph(sid.paragraph)
        if not 0 <= sid.sentence < len(para.sentences):
            raise ValueError(f"sentence id {sid} out of range")
        return para.sentences[sid.sentence]


class Subject(Enum):
    PHYSICS = "physics"
    MATH = "math"
    CS = "cs"
    Q_BIO = "q-bio"
    Q_FIN = "q-fin"
    STAT = "stat"
    OTHER = "other"


_PHYSICS_ARCHIVES = {
    "astro-ph", "cond-mat", "gr-qc", "hep-ex", "hep-lat", "hep-ph", "hep-th",
    "math-ph", "nlin", "nucl-ex", "nucl-th", "physics", "quant-ph",
}


def normalize_subject(raw: str) -> Subject:
    """Map a subject string (canonical name or an archive-style category
    like "cs.CL") onto the coarse subject enum; unknown strings fall back
    to OTHER."""
    base = raw.strip().lower().split(".")[0]
    try:
        return Subject(base)
    except ValueError:
        pass
    if base in _PHYSICS_ARCHIVES:
        return Subject.PHYSICS
    return Subject.OTHER


@dataclass(frozen=True)
class ArticleGroup:
    arxiv_id: str
    subject: Subject
    versions: tuple[DocVersion, ...]

    def __post_init__(self) -> None:
        if not self.arxiv_id:
            raise ValueError("arxiv_id must be non-empty")
        if not self.versions:
            raise ValueError("group must hold at least one version")

    def version(self, version_index: int) -> DocVersion:
        for v in self.versions:
            if v.version_index == version_index:
                return v
        raise ValueError(f"group {self.arxiv_id} has no version {version_index}")

    def adjacent_pairs(self) -> Iterator[tuple[DocVersion, DocVersion]]:
        for a, b in zip(self.versions, self.versions[1:]):
            yield a, b


def build_group(
    arxiv_id: str,
    subject: Subject | str,
    versions: Iterable[DocVersion],
    where: str = "group",
) -> ArticleGroup:
    """Assemble a group, sorting versions and enforcing the ordering
    invariants (unique version indices, strictly increasing timestamps)."""
    if isinstance(subject, str):
        subject = normalize_subject(subject)
    ordered = sorted(versions, key=lambda v: v.version_index)
    for a, b in zip(ordered, ordered[1:]):
        if a.version_index == b.version_index:
            raise CorpusFormatError(f"{where}: duplicate version_index {a.version_index}")
        if a.timestamp >= b.timestamp:
            raise CorpusFormatError(
                f"{where}: timestamps must strictly increase with version_index "
                f"(version {b.version_index} has {b.timestamp} <= {a.timestamp})"
            )
    return ArticleGroup(arxiv_id=arxiv_id, subject=subject, versions=tuple(ordered))


# ---------------------------------------------------------------------------
# corpus JSON

def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise CorpusFormatError(f"{path}: {message}")


def parse_corpus(data: bytes | str) -> tuple[ArticleGroup, ...]:
    """Parse corpus JSON (a top-level array of article groups).

    Versions are sorted by version index; timestamps must strictly
    increase with it.  Schema violations raise CorpusFormatError naming
    the offending JSON path.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise CorpusFormatError(f"invalid JSON: {e}") from None
    _expect(isinstance(obj, list), "$", "expected a top-level array of article groups")
    return tuple(_parse_group(g, f"$[{n}]") for n, g in enumerate(obj))


def _parse_group(obj: Any, path: str) -> ArticleGroup:
    _expect(isinstance(obj, dict), path, "expected an object")
    _expect(isinstance(obj.get("arxiv_id"), str) and obj["arxiv_id"], f"{path}.arxiv_id",
            "expected a non-empty string")
    _expect(isinstance(obj.get("subject"), str), f"{path}.subject", "expected a string")
    versions = obj.get("versions")
    _expect(isinstance(versions, list) and versions, f"{path}.versions",
            "expected a non-empty array")
    parsed = [
        _parse_version(v, f"{path}.versions[{n}]") for n, v in enumerate(versions)
    ]
    return build_group(obj["arxiv_id"], obj["subject"], parsed, where=f"{path}.versions")


def _parse_version(obj: Any, path: str) -> DocVersion:
    _expect(isinstance(obj, dict), path, "expected an object")
    version = obj.get("version")
    _expect(isinstance(version, int) and not isinstance(version, bool) and version >= 1,
            f"{path}.version", "expected a positive integer")
    timestamp = obj.get("timestamp")
    _expect(isinstance(timestamp, int) and not isinstance(timestamp, bool),
            f"{path}.timestamp", "expected an integer")
    paragraphs = obj.get("paragraphs")
    _expect(isinstance(paragraphs, list), f"{path}.paragraphs", "expected an array")
    raws: list[list[str]] = []
    for n, p in enumerate(paragraphs):
        ppath = f"{path}.paragraphs[{n}]"
        _expect(isinstance(p, dict), ppath, "expected an object")
        sentences = p.get("sentences")
        _expect(isinstance(sentences, list), f"{ppath}.sentences", "expected an array")
        for m, s in enumerate(sentences):
            _expect(isinstance(s, str), f"{ppath}.sentences[{m}]", "expected a string")
        raws.append(list(sentences))
    return DocVersion.build(version, timestamp, raws)


def serialize_corpus(groups: Iterable[ArticleGroup]) -> str:
    """Serialize groups back to corpus JSON; parse_corpus round-trips it."""
    out = []
    for g in groups:
        out.append({
            "arxiv_id": g.arxiv_id,
            "subject": g.subject.value,
            "versions": [
                {
                    "version": v.version_index,
                    "timestamp": v.timestamp,
                    "paragraphs": [
                        {"sentences": [s.raw for s in p.sentences]} for p in v.paragraphs
                    ],
                }
                for v in g.versions
            ],
        })
    return json.dumps(out, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# compatibility reader for the released arXivEdits distribution

def parse_arxivedits_corpus(data: bytes | str) -> tuple[ArticleGroup, ...]:
    """Best-effort reader mapping the released distribution's field
    spellings onto the native schema.

    Accepted per group: id under "arxiv_id"/"paper_id"/"doc_id"/"id";
    subject under "subject"/"primary_category"/"category"; versions as an
    array or as a mapping keyed by version name.  Per version: the index
    under "version"/"version_index" (ints or strings like "v2"), the
    timestamp under "timestamp"/"time"/"created" (missing ones are
    synthesised to preserve ordering), and paragraphs either as
    {"sentences": [...]} objects or as bare arrays of sentence strings.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise CorpusFormatError(f"invalid JSON: {e}") from None
    if isinstance(obj, dict):
        for key in ("groups", "papers", "data"):
            if isinstance(obj.get(key), list):
                obj = obj[key]
                break
        else:
            obj = [obj]
    _expect(isinstance(obj, list), "$", "expected an array of article groups")
    return tuple(_compat_group(g, f"$[{n}]") for n, g in enumerate(obj))


def _first_key(obj: dict, keys: Iterable[str]) -> Any:
    for k in keys:
        if k in obj:
            return obj[k]
    return None


def _compat_version_index(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise CorpusFormatError(f"{path}: expected a version index")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.lower().lstrip("v")
        if text.isdigit():
            return int(text)
    raise CorpusFormatError(f"{path}: cannot interpret version index {value!r}")


def _compat_group(obj: Any, path: str) -> ArticleGroup:
    _expect(isinstance(obj, dict), path, "expected an object")
    arxiv_id = _first_key(obj, ("arxiv_id", "paper_id", "doc_id", "id"))
    _expect(isinstance(arxiv_id, str) and arxiv_id, path, "no usable article id field")
    subject = _first_key(obj, ("subject", "primary_category", "category")) or "other"
    raw_versions = obj.get("versions")
    if isinstance(raw_versions, dict):
        raw_versions = [
            dict(v, version=k) if isinstance(v, dict) and "version" not in v else v
            for k, v in sorted(raw_versions.items(), key=lambda kv: _compat_version_index(kv[0], path))
        ]
    _expect(isinstance(raw_versions, list) and raw_versions, f"{path}.versions",
            "expected versions")
    parsed = []
    last_ts: int | None = None
    for n, v in enumerate(sorted(
        (v for v in raw_versions),
        key=lambda v: _compat_version_index(
            _first_key(v, ("version", "version_index")) if isinstance(v, dict) else None,
            f"{path}.versions",
        ),
    )):
        vpath = f"{path}.versions[{n}]"
        _expect(isinstance(v, dict), vpath, "expected an object")
        index = _compat_version_index(_first_key(v, ("version", "version_index")), vpath)
        ts = _first_key(v, ("timestamp", "time", "created"))
        if not isinstance(ts, int) or isinstance(ts, bool):
            ts = last_ts + 1 if last_ts is not None else index
        if last_ts is not None and ts <= last_ts:
            ts = last_ts + 1
        last_ts = ts
        paragraphs = v.get("paragraphs")
        _expect(isinstance(paragraphs, list), f"{vpath}.paragraphs", "expected an array")
        raws: list[list[str]] = []
        for m, p in enumerate(paragraphs):
            ppath = f"{vpath}.paragraphs[{m}]"
            if isinstance(p, dict):
                sentences = p.get("sentences")
            else:
                sentences = p
            _expect(isinstance(sentences, list), ppath, "expected sentences")
            for i, s in enumerate(sentences):
                _expect(isinstance(s, str), f"{ppath}[{i}]", "expected a string")
            raws.append(list(sentences))
        parsed.append(DocVersion.build(index, ts, raws))
    return build_group(arxiv_id, str(subject), parsed, where=f"{path}.versions")


def load_corpus(path: str, compat: bool = False) -> tuple[ArticleGroup, ...]:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_arxivedits_corpus(data) if compat else parse_corpus(data)
