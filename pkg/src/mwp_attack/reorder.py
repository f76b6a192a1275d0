"""Question reordering attack: front the question, append the body facts.

Transform, for a problem "S1 ... Sk Q?":

    "<Q core> given that <s1> and <s2> ... and <sk>?"

Details that make the output fluent:

- Pronouns in the question are resolved to their nearest proper-noun
  antecedent first (rule based, see resolve_coreferences).
- A composite question of the form "If <condition>, <wh-clause>?" is split
  when the condition is itself compound (contains a coordinating "but"/"and"):
  the wh-clause fronts and the condition joins the body facts, commas
  dropped.  A simple condition ("If there are 3 boxes, how many ...") stays
  attached to the fronted question.
- Body sentences lose their terminal '.' and are lowercased at the first
  character unless they start with a proper noun or "I".
- Exactly one '?', at the end.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .equation import DEFAULT_TOL, judge
from .errors import InvalidConfig, NoBodySentences
from .lexicon import (
    FUNCTION_WORDS,
    NAME_GENDER,
    NUMBER_WORDS,
    PRONOUNS_FEMALE,
    PRONOUNS_MALE,
    PRONOUNS_NEUTER,
    PRONOUNS_PLURAL,
    PRONOUNS_POSSESSIVE,
    PRONOUNS_THIRD,
    VERBS,
    looks_like_noun,
)
from .problem import MathWordProblem, Sentence, tokenize, tokenize_spans
from .results import METHOD_QR, AttackResult, deceives


@dataclass(frozen=True)
class ReorderConfig:
    connective: str = "given that"
    clause_joiner: str = "and"
    resolve_pronouns: bool = True

    def __post_init__(self):
        if not self.connective.strip():
            raise InvalidConfig("connective must be nonempty")
        if not self.clause_joiner.strip():
            raise InvalidConfig("clause_joiner must be nonempty")


def _pronoun_gender(token_lower: str) -> str | None:
    if token_lower in PRONOUNS_MALE:
        return "m"
    if token_lower in PRONOUNS_FEMALE:
        return "f"
    if token_lower in PRONOUNS_PLURAL:
        return "pl"
    if token_lower in PRONOUNS_NEUTER:
        return "n"
    return None


def _possessive_base(token: str) -> str | None:
    for mark in ("'s", "’s"):
        if token.endswith(mark) and len(token) > 2:
            return token[: -len(mark)]
    return None


def _antecedent_candidates(sentence: Sentence, names: dict[str, str]) -> list[tuple[str, str | None]]:
    """Proper-noun mentions (name, gender) in sentence order.

    A capitalized mid-sentence content word counts; a sentence-initial
    capitalized word counts only when it is in the known-name lexicon.
    """
    out: list[tuple[str, str | None]] = []
    for idx, tok in enumerate(sentence.tokens):
        base = _possessive_base(tok) or tok
        if not base or not base[0].isupper() or not base.isalpha():
            continue
        low = base.lower()
        if low in FUNCTION_WORDS or low in VERBS or low in NUMBER_WORDS:
            continue
        if idx == 0 and low not in names:
            continue
        out.append((base, names.get(low)))
    return out


def _compatible(pron_gender: str, name_gender: str | None) -> bool:
    if pron_gender in ("pl", "n"):
        return False  # no single proper-noun antecedent for these
    return name_gender is None or name_gender == pron_gender


def resolve_coreferences(
    problem: MathWordProblem,
    names: dict[str, str] = NAME_GENDER,
) -> MathWordProblem:
    """Replace question pronouns with their most recent proper-noun antecedent.

    Only the question is rewritten; body sentences stay as they are.  A
    pronoun whose referent already appears earlier in the question (either
    originally or through a replacement just made) is left in place, so each
    referent is spelled out at most once.  Pronouns with no antecedent are
    left alone and flagged in the returned problem's meta.
    """
    body_mentions: list[tuple[str, str | None]] = []
    for sent in problem.body:
        body_mentions.extend(_antecedent_candidates(sent, names))

    question = problem.question
    spans = tokenize_spans(question.text)
    established: list[tuple[str, str | None]] = []
    replacements: list[tuple[int, int, str]] = []
    unresolved: list[str] = []

    for i, (tok, start, end) in enumerate(spans):
        low = tok.lower()
        if low not in PRONOUNS_THIRD:
            base = _possessive_base(tok) or tok
            if base and base[0].isupper() and base.isalpha():
                blow = base.lower()
                if blow not in FUNCTION_WORDS and blow not in VERBS and blow not in NUMBER_WORDS:
                    if i > 0 or blow in names:
                        established.append((base, names.get(blow)))
            continue
        if low == "it" and i == 0:
            continue  # expletive "It rained ..." style subject
        gender = _pronoun_gender(low)
        if gender in ("pl", "n"):
            unresolved.append(tok)
            continue
        if any(_compatible(gender, g) for _, g in established):
            continue  # referent already spelled out earlier in the question
        antecedent = None
        for name, g in reversed(body_mentions):
            if _compatible(gender, g):
                antecedent = (name, g)
                break
        if antecedent is None:
            unresolved.append(tok)
            continue
        name, g = antecedent
        if low in PRONOUNS_POSSESSIVE and _is_possessive_use(spans, i):
            new = f"{name}'s"
        elif low in ("hers", "theirs"):
            new = f"{name}'s"
        else:
            new = name
        replacements.append((start, end, new))
        established.append((name, g))

    if not replacements and not unresolved:
        return problem
    text = question.text
    for start, end, new in reversed(replacements):
        text = text[:start] + new + text[end:]
    meta = dict(problem.meta)
    if unresolved:
        meta["unresolved_pronouns"] = unresolved
    return replace(problem, question=Sentence.from_text(text), meta=meta)


def _is_possessive_use(spans, i) -> bool:
    """Disambiguate "her"/"his": possessive when a noun (phrase) follows."""
    tok = spans[i][0].lower()
    if tok in ("their", "its"):
        return True
    j = i + 1
    while j < len(spans):
        nxt = spans[j][0]
        if nxt[0].isdigit() or nxt.lower() in NUMBER_WORDS:
            j += 1
            continue
        return looks_like_noun(nxt)
    return False


_WH_AFTER_COMMA = re.compile(r",\s*(?=(?:how|what|find)\b)", re.IGNORECASE)
_COORDINATORS = {"but", "and"}


def split_fronted_condition(question_core: str) -> tuple[str | None, str]:
    """Split "If <compound condition>, <wh-clause>" questions.

    Returns (condition, wh_clause); condition is None when the question
    should front in one piece (not if-led, no wh split point, or a simple
    single-event condition).
    """
    tokens = tokenize(question_core)
    if not tokens or tokens[0].lower() != "if":
        return None, question_core
    m = _WH_AFTER_COMMA.search(question_core)
    if m is None:
        return None, question_core
    condition = question_core[: m.start()].strip()
    wh_clause = question_core[m.end():].strip()
    if not any(t.lower() in _COORDINATORS for t in tokenize(condition)):
        return None, question_core
    return condition, wh_clause


def _strip_terminal(text: str) -> str:
    t = text.strip()
    while t and t[-1] in ".?!":
        t = t[:-1].rstrip()
    return t


def _strip_commas(text: str) -> str:
    return " ".join(text.replace(",", " ").split())


def _lower_first(clause: str) -> str:
    for i, ch in enumerate(clause):
        if ch.isalpha():
            word = tokenize(clause[i:])[0]
            if word == "I":
                return clause
            low = word.lower()
            if low in FUNCTION_WORDS or low in VERBS or low in NUMBER_WORDS:
                return clause[:i] + ch.lower() + clause[i + 1:]
            return clause  # treated as a proper noun, keep its capital
    return clause


def _capitalize_first(text: str) -> str:
    for i, ch in enumerate(text):
        if ch.isalpha():
            return text[:i] + ch.upper() + text[i + 1:]
    return text


def reorder_question(problem: MathWordProblem, config: ReorderConfig | None = None) -> str:
    """Build the reordered problem text (question first, facts after)."""
    config = config or ReorderConfig()
    if not problem.body:
        raise NoBodySentences(f"problem {problem.id!r} has no body to reorder")
    source = resolve_coreferences(problem) if config.resolve_pronouns else problem

    q_core = _strip_terminal(source.question.text)
    condition, q_core = split_fronted_condition(q_core)

    clauses = [_strip_terminal(s.text) for s in source.body]
    if condition:
        clauses.append(_strip_commas(condition))
    clauses = [_lower_first(c) for c in clauses if c]

    joined = f" {config.clause_joiner} ".join(clauses)
    out = f"{_capitalize_first(q_core)} {config.connective} {joined}?"
    return " ".join(out.split())


def qr_attack(
    problem: MathWordProblem,
    solver,
    tol: float = DEFAULT_TOL,
    config: ReorderConfig | None = None,
    success_rule: str = "verdict",
) -> AttackResult:
    """Query the solver on the original and the reordered text.

    Success means the solver was right on the original and wrong (or
    invalid) on the reordered text.  When the attack fails the final text
    falls back to the original; the attempt is kept in notes.
    """
    orig_text = problem.raw_text
    orig_pred = solver.solve(orig_text)
    orig_v = judge(orig_pred, problem.gold_equation, problem.gold_answer, tol)

    attempt = reorder_question(problem, config)
    adv_pred = solver.solve(attempt)
    adv_v = judge(adv_pred, problem.gold_equation, problem.gold_answer, tol)

    success = orig_v.correct and deceives(orig_pred, orig_v, adv_pred, adv_v, success_rule)
    if success:
        return AttackResult(
            method=METHOD_QR, original_text=orig_text, adversarial_text=attempt,
            original_prediction=orig_pred, adversarial_prediction=adv_pred,
            success=True, queries_used=2, originally_correct=True,
            original_verdict=orig_v, adversarial_verdict=adv_v,
            problem_id=problem.id,
        )
    return AttackResult(
        method=METHOD_QR, original_text=orig_text, adversarial_text=orig_text,
        original_prediction=orig_pred, adversarial_prediction=orig_pred,
        success=False, queries_used=2, originally_correct=orig_v.correct,
        original_verdict=orig_v, adversarial_verdict=orig_v,
        problem_id=problem.id,
        notes={"attempted_text": attempt, "attempted_prediction": adv_pred},
    )
