"""Black-box solver and paraphrase-provider contracts.

Wire protocol (JSON over HTTP):

    POST {base_url}/solve       {"id": str, "text": str}
                            ->  200 {"id": str, "equation": str}
    POST {base_url}/paraphrase  {"id": str, "sentence": str, "num_return": int}
                            ->  200 {"id": str, "candidates": [str, ...]}
    GET  {base_url}/health  ->  200 {"status": "ok"}

Non-200 responses or missing fields are MalformedResponse; transport
failures after the configured retries are OracleUnavailable.  Deterministic
in-process doubles (scripted solver, rule-based paraphraser) live here too.
"""
from __future__ import annotations

import hashlib
import json
import re
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Protocol

import requests

from .errors import EmptyInput, InvalidConfig, MalformedResponse, OracleUnavailable
from .problem import normalize_ws


class SolverOracle(Protocol):
    def solve(self, text: str) -> str: ...


class ParaphraseProvider(Protocol):
    def paraphrase(self, sentence: str, m: int) -> list[str]: ...


@dataclass(frozen=True)
class SolverEndpoint:
    base_url: str
    timeout: float = 10.0
    retries: int = 2
    name: str = "solver"
    bearer_token: str | None = None

    def __post_init__(self):
        if self.timeout <= 0:
            raise InvalidConfig("timeout must be > 0")
        if self.retries < 0:
            raise InvalidConfig("retries must be >= 0")


@dataclass(frozen=True)
class ParaphraseProviderConfig:
    kind: str  # "remote" | "rule-based"
    base_url: str | None = None
    m_default: int = 7
    timeout: float = 10.0
    retries: int = 2
    bearer_token: str | None = None

    def __post_init__(self):
        if self.kind not in ("remote", "rule-based"):
            raise InvalidConfig(f"unknown provider kind {self.kind!r}")
        if self.kind == "remote" and not self.base_url:
            raise InvalidConfig("remote provider needs base_url")
        if self.m_default < 1:
            raise InvalidConfig("m_default must be >= 1")


def _headers(token: str | None) -> dict:
    return {"Authorization": f"Bearer {token}"} if token else {}


def _post_json(url: str, payload: dict, timeout: float, retries: int, token: str | None) -> dict:
    last_exc = None
    for _ in range(retries + 1):
        try:
            resp = requests.post(url, json=payload, timeout=timeout, headers=_headers(token))
        except requests.RequestException as exc:
            last_exc = exc
            time.sleep(0.05)
            continue
        if resp.status_code != 200:
            raise MalformedResponse(f"{url} returned HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise MalformedResponse(f"{url} returned non-JSON body") from exc
    raise OracleUnavailable(f"{url} unreachable after {retries + 1} attempts: {last_exc}")


class HttpSolverClient:
    def __init__(self, endpoint: SolverEndpoint):
        self.endpoint = endpoint

    def solve(self, text: str) -> str:
        if not text or not text.strip():
            raise EmptyInput("cannot query the solver with blank text")
        payload = {"id": str(uuid.uuid4()), "text": text}
        body = _post_json(
            f"{self.endpoint.base_url.rstrip('/')}/solve", payload,
            self.endpoint.timeout, self.endpoint.retries, self.endpoint.bearer_token,
        )
        equation = body.get("equation")
        if not isinstance(equation, str):
            raise MalformedResponse("solver response missing 'equation'")
        return equation


class HttpParaphraseClient:
    def __init__(self, config: ParaphraseProviderConfig):
        if config.kind != "remote":
            raise InvalidConfig("HttpParaphraseClient needs a remote config")
        self.config = config

    def paraphrase(self, sentence: str, m: int) -> list[str]:
        if m < 1:
            raise ValueError("m must be >= 1")
        payload = {"id": str(uuid.uuid4()), "sentence": sentence, "num_return": m}
        body = _post_json(
            f"{self.config.base_url.rstrip('/')}/paraphrase", payload,
            self.config.timeout, self.config.retries, self.config.bearer_token,
        )
        candidates = body.get("candidates")
        if not isinstance(candidates, list) or not all(isinstance(c, str) for c in candidates):
            raise MalformedResponse("paraphrase response missing 'candidates'")
        return candidates

    def health(self) -> bool:
        url = f"{self.config.base_url.rstrip('/')}/health"
        try:
            resp = requests.get(url, timeout=self.config.timeout,
                                headers=_headers(self.config.bearer_token))
        except requests.RequestException as exc:
            raise OracleUnavailable(f"{url}: {exc}") from exc
        return resp.status_code == 200 and resp.json().get("status") == "ok"


def solve(endpoint: SolverEndpoint, text: str) -> str:
    """One-shot remote solve; returns the solver's equation text verbatim."""
    return HttpSolverClient(endpoint).solve(text)


def get_paraphrases(provider: ParaphraseProvider, sentence: str, m: int) -> list[str]:
    """Top-m candidates in provider rank order; empty entries dropped."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = [c for c in provider.paraphrase(sentence, m) if c and c.strip()]
    return out[:m]


# --- response cache -------------------------------------------------------

def cache_key(kind: str, name: str, text: str, m: int | None = None) -> str:
    raw = f"{kind}|{name}|{normalize_ws(text)}|{'' if m is None else m}"
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()


class OracleCache:
    """Append-only JSONL cache: {key, kind, request, response, ts}.

    Hits return the stored response unchanged, so campaigns are resumable
    and repeated identical queries cost one remote call.
    """

    def __init__(self, path: str | None = None):
        self.path = path
        self._mem: dict[str, object] = {}
        self._lock = threading.Lock()
        if path is not None:
            try:
                with open(path, encoding="utf-8") as fh:
                    for line in fh:
                        if line.strip():
                            rec = json.loads(line)
                            self._mem[rec["key"]] = rec["response"]
            except FileNotFoundError:
                pass

    def get(self, key: str):
        with self._lock:
            return self._mem.get(key)

    def put(self, key: str, kind: str, request: object, response: object) -> None:
        with self._lock:
            if key in self._mem:
                return
            self._mem[key] = response
            if self.path is not None:
                rec = {"key": key, "kind": kind, "request": request,
                       "response": response, "ts": time.time()}
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(rec) + "\n")


class CachingSolver:
    def __init__(self, inner: SolverOracle, cache: OracleCache, name: str = "solver"):
        self.inner = inner
        self.cache = cache
        self.name = name

    def solve(self, text: str) -> str:
        key = cache_key("solve", self.name, text)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        result = self.inner.solve(text)
        self.cache.put(key, "solve", {"text": text}, result)
        return result


class CachingParaphraser:
    def __init__(self, inner: ParaphraseProvider, cache: OracleCache, name: str = "paraphrase"):
        self.inner = inner
        self.cache = cache
        self.name = name

    def paraphrase(self, sentence: str, m: int) -> list[str]:
        key = cache_key("paraphrase", self.name, sentence, m)
        hit = self.cache.get(key)
        if hit is not None:
            return list(hit)
        result = self.inner.paraphrase(sentence, m)
        self.cache.put(key, "paraphrase", {"sentence": sentence, "num_return": m}, result)
        return result


# --- deterministic test doubles -------------------------------------------

@dataclass
class ScriptedSolver:
    """Maps whitespace-normalized text to a canned equation, else fallback."""
    script: dict[str, str]
    fallback: str
    calls: int = 0
    seen: list[str] = field(default_factory=list)

    def solve(self, text: str) -> str:
        self.calls += 1
        norm = normalize_ws(text)
        self.seen.append(norm)
        return self.script.get(norm, self.fallback)


def scripted_solver(script: dict[str, str], fallback: str) -> ScriptedSolver:
    return ScriptedSolver(script={normalize_ws(k): v for k, v in script.items()},
                          fallback=fallback)


# Rewrite table for the offline rule-based paraphraser.  Each entry is
# (compiled pattern, [templates]); templates are .format()ed with the
# pattern's named groups.  All rewrites keep every number and its head
# entity, so they survive filter_candidates for their own source sentence.
RULE_TABLE: list[tuple[re.Pattern, list[str]]] = [
    # "<Name> has 5 books."
    (re.compile(r"^(?P<s>[A-Z][a-z]+) has (?P<n>\d+(?:\.\d+)?) (?P<e>[a-z]+)\s*\.$"),
     ["{s} has got {n} {e}.",
      "There are {n} {e} in {s}'s possession.",
      "{s} owns {n} {e}."]),
    # inverse of the possession form
    (re.compile(r"^There are (?P<n>\d+(?:\.\d+)?) (?P<e>[a-z]+) in (?P<s>[A-Z][a-z]+)['’]s possession\s*\.$"),
     ["{s} has {n} {e}."]),
    # "... had 10 members total."
    (re.compile(r"^(?P<pre>.+) had (?P<n>\d+(?:\.\d+)?) (?P<e>[a-z]+) total\s*\.$"),
     ["{pre} had a total of {n} {e}."]),
    # "<Name> has 12 pencils stored in boxes."
    (re.compile(r"^(?P<pre>.+) (?P<n>\d+(?:\.\d+)?) (?P<e>[a-z]+) stored in (?P<where>[a-z]+)\s*\.$"),
     ["{pre} {n} {e} in {where}."]),
    # trailing time phrase fronts: "... over the summer."
    (re.compile(r"^(?P<vp>[^,]+) over the (?P<when>summer|winter|weekend|year)\s*\.$"),
     ["Over the {when}, {vp}."]),
    # "spent 4 dollars buying new mower blades."
    (re.compile(r"^(?P<pre>.+) buying (?P<obj>[a-z ]+)\s*\.$"),
     ["{pre} on {obj}."]),
    # verb swaps
    (re.compile(r"^(?P<pre>.+) bought (?P<post>.+)$"),
     ["{pre} purchased {post}"]),
    (re.compile(r"^(?P<pre>.+) gave (?P<post>.+)$"),
     ["{pre} handed {post}"]),
    # "There are 3 boxes."
    (re.compile(r"^There are (?P<n>\d+(?:\.\d+)?) (?P<e>[a-z]+)\s*\.$"),
     ["There are {n} {e} available."]),
    # question tail: "... do they have together?"
    (re.compile(r"^How many (?P<e>[a-z]+) do (?P<s>[a-z]+) have together\s*\?$"),
     ["How many {e} do {s} have?"]),
    # "How many pencils must go in each box?"
    (re.compile(r"^How many (?P<e>[a-z]+) must go in each (?P<c>[a-z]+)\s*\?$"),
     ["Find the number of {e} in each {c}?"]),
    # "How many worksheets would she have to grade?"
    (re.compile(r"^How many (?P<e>[a-z]+) would (?P<s>[a-z]+) have to (?P<v>[a-z]+)\s*\?$"),
     ["How many things would {s} have to {v}?"]),
]


def rule_paraphrases(sentence: str, m: int) -> list[str]:
    """Deterministic offline paraphrases from the fixed rewrite table.

    Unmatched sentences yield [].  Output order follows table order.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    text = sentence.strip()
    out: list[str] = []
    for pattern, templates in RULE_TABLE:
        match = pattern.match(text)
        if match is None:
            continue
        for tpl in templates:
            cand = tpl.format(**match.groupdict())
            if cand not in out and normalize_ws(cand) != normalize_ws(text):
                out.append(cand)
    return out[:m]


# keep the operation name used by the CLI / docs
rule_paraphraser = rule_paraphrases


@dataclass
class RuleParaphraser:
    """ParaphraseProvider backed by the rule table."""
    calls: int = 0

    def paraphrase(self, sentence: str, m: int) -> list[str]:
        self.calls += 1
        return rule_paraphrases(sentence, m)


def build_provider(config: ParaphraseProviderConfig) -> ParaphraseProvider:
    if config.kind == "remote":
        return HttpParaphraseClient(config)
    return RuleParaphraser()
