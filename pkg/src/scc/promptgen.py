"""Rendering of the three-part in-context-learning prompt with a token budget."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .retrieval import Demonstration

ZERO_SHOT_CAP_WORDS = 15
TOKENS_PER_WORD = 1.3

HEADER_TASK = "To generate a short summarization in one sentence for smart contract code."
HEADER_EXAMPLES = (
    "To alleviate the difficulty of this task, we will give you top-{k} examples."
    " Please learn from them."
)
CAP_CLAUSE = "The length should not exceed {cap} words."
CAP_CLAUSE_LITERAL = "The length should not exceed {cap}."


class PromptError(Exception):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    """Optional layout override with {DEMOS}, {QUERY}, and {CAP} placeholders."""

    text: str

    @classmethod
    def load(cls, path) -> "PromptTemplate":
        with open(path, encoding="utf-8") as fh:
            return cls(fh.read())


@dataclass
class RenderedPrompt:
    text: str
    demo_count: int
    length_cap_words: int
    estimated_tokens: int
    dropped_ids: list[str] = field(default_factory=list)


def estimate_tokens(text: str) -> int:
    return math.ceil(len(text.split()) * TOKENS_PER_WORD)


def _demo_block(demo: Demonstration) -> str:
    comment_lines = demo.comment.splitlines() or [""]
    prefixed = "\n".join(f"# {line}" for line in comment_lines)
    return f"{prefixed}\n{demo.code}"


def _render(
    query_code: str,
    demos: list[Demonstration],
    cap_text: str,
    most_similar_last: bool,
    template: PromptTemplate | None,
) -> str:
    ordered = list(reversed(demos)) if most_similar_last else list(demos)
    demo_text = "\n\n".join(_demo_block(d) for d in ordered)
    query_block = f"{query_code}\n{cap_text}"
    if template is not None:
        return (
            template.text.replace("{DEMOS}", demo_text)
            .replace("{QUERY}", query_code)
            .replace("{CAP}", cap_text)
        )
    if demos:
        header = f"{HEADER_TASK} {HEADER_EXAMPLES.format(k=len(demos))}"
        return f"{header}\n\n{demo_text}\n\n{query_block}\n"
    return f"{HEADER_TASK}\n\n{query_block}\n"


def build_prompt(
    query_code: str,
    demos: list[Demonstration],
    mode: str = "few",
    budget: int | None = None,
    most_similar_last: bool = True,
    literal_cap: bool = False,
    template: PromptTemplate | None = None,
) -> RenderedPrompt:
    """Render the instruction / demonstrations / query prompt.

    The length cap is the word count of the most similar retrieved comment,
    or 15 words in zero-shot mode.  Demonstrations are laid out with their
    comment lines prefixed by "#" followed by the code verbatim; the most
    similar demonstration sits last (next to the query) unless reversed.
    """
    if mode not in ("zero", "one", "few"):
        raise PromptError(f"unknown mode {mode!r}")
    if mode in ("one", "few") and not demos:
        raise PromptError(f"mode {mode!r} requires at least one demonstration")

    if mode == "zero":
        active: list[Demonstration] = []
        cap_words = ZERO_SHOT_CAP_WORDS
        cap_text = CAP_CLAUSE.format(cap=cap_words)
    else:
        active = demos[:1] if mode == "one" else list(demos)
        top1 = demos[0]
        cap_words = len(top1.comment.split())
        if literal_cap:
            cap_text = CAP_CLAUSE_LITERAL.format(cap=top1.comment)
        else:
            cap_text = CAP_CLAUSE.format(cap=cap_words)

    dropped: list[str] = []
    while True:
        text = _render(query_code, active, cap_text, most_similar_last, template)
        tokens = estimate_tokens(text)
        if budget is None or tokens <= budget:
            return RenderedPrompt(text, len(active), cap_words, tokens, dropped)
        if not active:
            raise PromptError(
                f"budget {budget} too small even for the bare prompt ({tokens} tokens)"
            )
        # drop the least-similar remaining demonstration
        dropped.append(active[-1].id)
        active = active[:-1]
