"""Prompt templates: versioned text files with named slots.

Templates ship with the package under prompts/ and can be shadowed by a
user-supplied directory. The content hash doubles as the template version
and is recorded in the trace of every run that used it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

EXTRACT_KEY_INFO = "extract_key_info"
CONTINUE_KNOWLEDGE = "continue_knowledge"
GENERATE_FOLLOWUP = "generate_followup"
EXPAND_ENTITY = "expand_entity"
DEFINE_ENTITY = "define_entity"
ANSWER_QUESTION = "answer_question"


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    text: str

    @property
    def sha(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()[:12]

    @property
    def version(self) -> str:
        return f"{self.name}@{self.sha}"

    def render(self, **slots: object) -> str:
        return self.text.format(**slots)


def load_template(name: str, overrides_dir: str | Path | None = None) -> PromptTemplate:
    """Load a template by name, preferring an override directory if given."""
    filename = f"{name}.txt"
    if overrides_dir is not None:
        candidate = Path(overrides_dir) / filename
        if candidate.exists():
            return PromptTemplate(name, candidate.read_text(encoding="utf-8"))
    text = resources.files("followgen.prompts").joinpath(filename).read_text(encoding="utf-8")
    return PromptTemplate(name, text)
