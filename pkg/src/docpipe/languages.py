"""Language registry and script classes used throughout the pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ScriptClass(Enum):
    # Order matters: detect_script breaks plurality ties by this order.
    LATIN = "Latin"
    DEVANAGARI = "Devanagari"
    TAMIL = "Tamil"
    BENGALI = "Bengali"
    TELUGU = "Telugu"
    PERSO_ARABIC = "PersoArabic"
    OTHER = "Other"


@dataclass(frozen=True)
class LanguageTag:
    """A 3-letter engine language code plus its display name and script."""

    code: str
    display_name: str
    script: ScriptClass

    def __post_init__(self) -> None:
        if len(self.code) != 3 or not self.code.isascii() or not self.code.islower():
            raise ValueError(f"language code must be 3 lowercase ASCII letters: {self.code!r}")


# Built-in registry. Santali (sat) ships in the registry even though no
# quality target exists for it; its Ol Chiki script falls outside the
# supported script classes.
REGISTRY: dict[str, LanguageTag] = {
    tag.code: tag
    for tag in [
        LanguageTag("eng", "English", ScriptClass.LATIN),
        LanguageTag("hin", "Hindi", ScriptClass.DEVANAGARI),
        LanguageTag("tam", "Tamil", ScriptClass.TAMIL),
        LanguageTag("urd", "Urdu", ScriptClass.PERSO_ARABIC),
        LanguageTag("ben", "Bengali", ScriptClass.BENGALI),
        LanguageTag("tel", "Telugu", ScriptClass.TELUGU),
        LanguageTag("sat", "Santali", ScriptClass.OTHER),
    ]
}


def get_language(code: str) -> LanguageTag:
    """Look up a registry language by code; unknown codes get an OTHER tag."""
    tag = REGISTRY.get(code)
    if tag is None:
        return LanguageTag(code, code, ScriptClass.OTHER)
    return tag


# Default language per script, used when a corpus or request names no
# language and only the script is known.
_SCRIPT_DEFAULTS = {
    ScriptClass.LATIN: "eng",
    ScriptClass.DEVANAGARI: "hin",
    ScriptClass.TAMIL: "tam",
    ScriptClass.BENGALI: "ben",
    ScriptClass.TELUGU: "tel",
    ScriptClass.PERSO_ARABIC: "urd",
    ScriptClass.OTHER: "eng",
}


def default_language_for_script(script: ScriptClass) -> LanguageTag:
    return REGISTRY[_SCRIPT_DEFAULTS[script]]
