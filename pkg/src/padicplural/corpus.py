"""Singular/plural corpora grouped by language and language family.

The on-disk format is a UTF-8 TSV with a literal header::

    language_code<TAB>family<TAB>singular<TAB>plural

A language may be listed under several families; each (language, family)
combination becomes a catalog entry.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Union

HEADER = ("language_code", "family", "singular", "plural")


class CorpusError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MalformedRow(CorpusError):
    pass


class EmptyField(CorpusError):
    pass


class EncodingError(CorpusError):
    pass


@dataclass(frozen=True)
class NounPair:
    singular: str
    plural: str

    def __post_init__(self):
        for name in ("singular", "plural"):
            value = getattr(self, name)
            if not value:
                raise EmptyField(f"{name} is empty")
            if any(c in value for c in "\x00\t\n\r"):
                raise MalformedRow(f"{name} {value!r} contains NUL, tab or newline")


@dataclass
class LanguageCorpus:
    language_code: str
    family: str
    pairs: list[NounPair] = field(default_factory=list)
    #: Every family the language was listed under, first one first.
    families: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.families:
            self.families = (self.family,)
        self.pairs = _dedup(self.pairs)

    def __len__(self):
        return len(self.pairs)


def _dedup(pairs: Iterable[NounPair]) -> list[NounPair]:
    return list(dict.fromkeys(pairs))


@dataclass(frozen=True)
class CorpusWarning:
    code: str
    message: str


def load_corpus(stream: Union[IO[str], IO[bytes], str, bytes]) -> list[LanguageCorpus]:
    """Parse a corpus TSV into per-language corpora sorted by language code.

    Accepts a text or binary stream, or the file contents directly.  Exact
    duplicate pairs within a language are dropped, keeping first occurrence.

    Raises:
        MalformedRow: missing/incorrect header or wrong column count.
        EmptyField: a blank language code, family, singular or plural.
        EncodingError: the input is not valid UTF-8.
    """
    text = stream if isinstance(stream, (str, bytes)) else stream.read()
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = text[: exc.start].count(b"\n") + 1
            raise EncodingError(f"invalid UTF-8: {exc.reason}", line) from None

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip("\r") != "\t".join(HEADER):
        raise MalformedRow(f"expected header {chr(9).join(HEADER)!r}", 1)

    grouped: dict[str, LanguageCorpus] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        cols = raw.rstrip("\r").split("\t")
        if len(cols) != len(HEADER):
            raise MalformedRow(f"expected {len(HEADER)} columns, got {len(cols)}", lineno)
        for name, value in zip(HEADER, cols):
            if not value:
                raise EmptyField(f"empty {name}", lineno)
        lang, family, singular, plural = cols
        try:
            pair = NounPair(singular, plural)
        except CorpusError as exc:
            raise type(exc)(str(exc), lineno) from None
        corpus = grouped.get(lang)
        if corpus is None:
            grouped[lang] = LanguageCorpus(lang, family, [pair])
        else:
            corpus.pairs.append(pair)
            if family not in corpus.families:
                corpus.families += (family,)

    out = []
    for lang in sorted(grouped):
        c = grouped[lang]
        c.pairs = _dedup(c.pairs)
        out.append(c)
    return out


def load_corpus_file(path) -> list[LanguageCorpus]:
    with open(path, "rb") as fh:
        return load_corpus(fh)


def dump_corpus(corpora: Iterable[LanguageCorpus]) -> str:
    """Serialise corpora back to the TSV format; ``load_corpus`` inverts it."""
    buf = io.StringIO()
    buf.write("\t".join(HEADER) + "\n")
    for c in corpora:
        for pair in c.pairs:
            for family in c.families:
                buf.write(f"{c.language_code}\t{family}\t{pair.singular}\t{pair.plural}\n")
    return buf.getvalue()


def validate_corpus(c: LanguageCorpus) -> list[CorpusWarning]:
    """Non-fatal data-quality warnings.  Noisy pairs are kept, only reported."""
    warnings = []
    plurals: dict[str, list[str]] = {}
    for pair in c.pairs:
        if pair.singular == pair.plural:
            warnings.append(
                CorpusWarning("IdenticalForms", f"{c.language_code}: {pair.singular!r} is its own plural")
            )
        plurals.setdefault(pair.singular, []).append(pair.plural)
    for singular, forms in plurals.items():
        if len(forms) > 1:
            warnings.append(
                CorpusWarning(
                    "ConflictingPlurals",
                    f"{c.language_code}: {singular!r} has plurals {', '.join(map(repr, forms))}",
                )
            )
    if len(c.pairs) < 3:
        warnings.append(
            CorpusWarning("TooSmallForLocal", f"{c.language_code}: only {len(c.pairs)} pairs")
        )
    return warnings


def build_catalog(corpora: Iterable[LanguageCorpus]) -> dict[str, list[str]]:
    """Family -> sorted language codes.  A language may sit in several families."""
    catalog: dict[str, set[str]] = {}
    for c in corpora:
        for family in c.families:
            catalog.setdefault(family, set()).add(c.language_code)
    return {family: sorted(langs) for family, langs in sorted(catalog.items())}
