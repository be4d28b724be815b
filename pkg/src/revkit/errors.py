"""Exception types shared across the package.

Anything raised for malformed input files or inconsistent data derives
from :class:`RevkitError`; the CLI maps these to exit code 2 and treats
everything else as an internal error (exit code 1).
"""
from __future__ import annotations


class RevkitError(Exception):
    """Base class for input and file-format errors."""


class CorpusFormatError(RevkitError):
    """Corpus JSON violates the schema; message names the JSON path."""


class AlignmentFormatError(RevkitError):
    """Sentence-alignment JSON is malformed or internally inconsistent."""


class FormatError(RevkitError):
    """Generic error for the auxiliary file formats (word alignments,
    edit files, prediction files)."""


class TreeParseError(FormatError):
    """Bracketed tree could not be parsed; carries a character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


class ConfigError(RevkitError):
    """Configuration file or flag value is invalid."""
