"""Prompt templates for the three LLM summarization modes.

Bodies ship as package data in Italian (operational default) and
English (used by the bundled translated fixtures). Rendering fills the
{K} marker and replaces {TEXT} with the document wrapped in literal
braces; braces inside the document are backslash-escaped so the
delimiter stays unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..errors import TribsumError

TEMPLATE_NAMES = ("extractive_k", "flowing", "issues", "issues_kw_bt")
LANGUAGES = ("it", "en")


class MissingPlaceholder(TribsumError):
    """A placeholder required by the template was not provided."""


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    language: str
    body: str


@lru_cache(maxsize=None)
def load_template(name: str, language: str = "it") -> PromptTemplate:
    if name not in TEMPLATE_NAMES:
        raise ValueError(f"unknown template {name!r}")
    if language not in LANGUAGES:
        raise ValueError(f"unknown template language {language!r}")
    body = (
        resources.files("tribsum.data.prompts")
        .joinpath(f"{name}.{language}.txt")
        .read_text("utf-8")
    )
    return PromptTemplate(name, language, body)


def escape_braces(text: str) -> str:
    """Escape backslashes and braces so the {TEXT} delimiter is unambiguous."""
    return text.replace("\\", "\\\\").replace("{", "\\{").replace("}", "\\}")


def render_prompt(
    template: PromptTemplate, text: str, k: int | None = None
) -> str:
    """Substitute placeholders; the document goes inside literal braces."""
    body = template.body
    if "{K}" in body:
        if k is None:
            raise MissingPlaceholder(
                f"template {template.name!r} requires k"
            )
        if k < 1:
            raise ValueError("k must be >= 1")
        body = body.replace("{K}", str(k))
    if "{TEXT}" not in body:
        raise MissingPlaceholder(
            f"template {template.name!r} has no {{TEXT}} slot"
        )
    return body.replace("{TEXT}", "{" + escape_braces(text) + "}")
