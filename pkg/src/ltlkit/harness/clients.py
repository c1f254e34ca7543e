"""Model clients: HTTP chat completion, transcript replay, and scripted
mocks, plus the append-only transcript cache that makes every run
re-scorable and resumable.

A prompt is sent as a tuple of message texts alternating user/assistant
(one entry for single-turn prompts).  The cache key is
(model id, sha256 of the joined messages), so the hash covers the fully
rendered prompt including exemplars and, for revision turns, the prior
reply.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol

import requests

from ..errors import CacheMissError, ConfigError


@dataclass(frozen=True)
class ModelClientSpec:
    """Connection and decoding parameters for a live model endpoint.

    Credentials are referenced by environment-variable name only; the
    key value itself never appears in configs, manifests, or reports.
    """

    name: str
    endpoint: str
    model: str
    credential_env: str
    temperature: float = 0.0
    max_tokens: int = 1024
    timeout_s: float = 60.0
    retry_count: int = 2
    retry_backoff_s: float = 1.0

    def to_manifest_dict(self) -> dict:
        return {
            "name": self.name,
            "endpoint": self.endpoint,
            "model": self.model,
            "credential_env": self.credential_env,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "timeout_s": self.timeout_s,
            "retry_count": self.retry_count,
            "retry_backoff_s": self.retry_backoff_s,
        }


class ClientError(Exception):
    """A model call that produced no usable reply."""

    def __init__(self, kind: str, detail: str):
        self.kind = kind  # "timeout" | "http_error" | "cache_miss"
        self.detail = detail
        super().__init__(f"{kind}: {detail}")


def prompt_hash(messages: tuple[str, ...]) -> str:
    joined = "\x1e".join(messages)
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


class TranscriptCache:
    """Append-only JSONL store of (model, prompt hash) -> reply."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[tuple[str, str], str] = {}
        self._lock = threading.Lock()
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    record = json.loads(line)
                    key = (record["model"], record["prompt_hash"])
                    self._entries[key] = record["reply"]

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, model: str, phash: str) -> str | None:
        return self._entries.get((model, phash))

    def put(self, model: str, phash: str, prompt: str, reply: str) -> None:
        with self._lock:
            if (model, phash) in self._entries:
                return
            self._entries[(model, phash)] = reply
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps({
                    "model": model,
                    "prompt_hash": phash,
                    "prompt": prompt,
                    "reply": reply,
                }, sort_keys=True) + "\n")


class Client(Protocol):
    model_id: str
    concurrent_safe: bool

    def complete(self, messages: tuple[str, ...], meta: Mapping[str, str]) -> str:
        """Return the reply to a conversation of alternating
        user/assistant texts ending with a user turn."""
        ...


class HttpChatClient:
    """OpenAI-style chat-completion endpoint over HTTP."""

    concurrent_safe = True

    def __init__(self, spec: ModelClientSpec, api_key: str | None = None,
                 min_request_interval_s: float = 0.0):
        import os

        self.spec = spec
        self.model_id = spec.model
        key = api_key if api_key is not None else os.environ.get(spec.credential_env)
        if not key:
            raise ConfigError(
                f"credential environment variable {spec.credential_env!r} is not set"
            )
        self._key = key
        self._interval = min_request_interval_s
        self._gate = threading.Lock()
        self._last_request = 0.0

    def _pace(self) -> None:
        if self._interval <= 0:
            return
        with self._gate:
            wait = self._last_request + self._interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()

    def complete(self, messages: tuple[str, ...], meta: Mapping[str, str]) -> str:
        chat = [
            {"role": "user" if i % 2 == 0 else "assistant", "content": text}
            for i, text in enumerate(messages)
        ]
        payload = {
            "model": self.spec.model,
            "messages": chat,
            "temperature": self.spec.temperature,
            "max_tokens": self.spec.max_tokens,
        }
        attempts = self.spec.retry_count + 1
        last_error: ClientError | None = None
        for attempt in range(attempts):
            if attempt:
                time.sleep(self.spec.retry_backoff_s * attempt)
            self._pace()
            try:
                response = requests.post(
                    self.spec.endpoint,
                    json=payload,
                    headers={"Authorization": f"Bearer {self._key}"},
                    timeout=self.spec.timeout_s,
                )
            except requests.Timeout:
                last_error = ClientError("timeout", f"after {self.spec.timeout_s}s")
                continue
            except requests.RequestException as exc:
                last_error = ClientError("http_error", str(exc))
                continue
            if response.status_code >= 500:
                last_error = ClientError("http_error", f"status {response.status_code}")
                continue
            if response.status_code != 200:
                raise ClientError("http_error", f"status {response.status_code}")
            try:
                return response.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise ClientError("http_error", f"malformed response body: {exc}")
        assert last_error is not None
        raise last_error


class ReplayClient:
    """Serves replies from the transcript cache only; a miss is an error."""

    concurrent_safe = True

    def __init__(self, model_id: str, cache: TranscriptCache):
        self.model_id = model_id
        self.cache = cache

    def complete(self, messages: tuple[str, ...], meta: Mapping[str, str]) -> str:
        reply = self.cache.get(self.model_id, prompt_hash(messages))
        if reply is None:
            raise ClientError("cache_miss", "prompt not in transcript cache")
        return reply


class MockClient:
    """Scripted offline model: replies come from a per-item answer map
    prepared by a persona (see harness.answers)."""

    concurrent_safe = True

    def __init__(self, model_id: str, answers: Mapping[str, str]):
        self.model_id = model_id
        self.answers = dict(answers)

    def complete(self, messages: tuple[str, ...], meta: Mapping[str, str]) -> str:
        item_id = meta.get("item_id")
        if item_id is None or item_id not in self.answers:
            raise ClientError("http_error", f"mock has no script for item {item_id!r}")
        return self.answers[item_id]


@dataclass
class SendResult:
    replies: tuple[str, ...]
    prompt_hashes: tuple[str, ...]
    prompt_text: str
    error_kind: str | None = None
    error_detail: str | None = None
    latency_s: float = 0.0
    cached: bool = False


def send(
    client: Client,
    prompt,
    cache: TranscriptCache | None = None,
    clock=time.monotonic,
) -> SendResult:
    """Send a rendered prompt or a two-turn script.

    Cache hits are served without touching the client, which is what
    makes reruns resume where they stopped; misses go to the client and
    live replies are appended to the cache.  Client failures are
    captured in the result, never raised.
    """
    from ..prompts import RenderedPrompt, TwoTurnScript

    start = clock()

    def one_turn(messages: tuple[str, ...], meta) -> tuple[str, str, bool]:
        phash = prompt_hash(messages)
        if cache is not None:
            hit = cache.get(client.model_id, phash)
            if hit is not None:
                return hit, phash, True
        reply = client.complete(messages, meta)
        if cache is not None:
            cache.put(client.model_id, phash, "\x1e".join(messages), reply)
        return reply, phash, False

    try:
        if isinstance(prompt, RenderedPrompt):
            meta = {"item_id": prompt.item_id, "turn": "1"}
            reply, phash, cached = one_turn((prompt.text,), meta)
            return SendResult(
                replies=(reply,), prompt_hashes=(phash,),
                prompt_text=prompt.text, latency_s=clock() - start, cached=cached,
            )
        if isinstance(prompt, TwoTurnScript):
            meta = {"item_id": prompt.first.item_id, "turn": "1"}
            reply1, h1, cached1 = one_turn((prompt.first.text,), meta)
            revision = prompt.revision_text(reply1)
            messages = (prompt.first.text, reply1, revision)
            meta = {"item_id": prompt.first.item_id, "turn": "2"}
            reply2, h2, cached2 = one_turn(messages, meta)
            return SendResult(
                replies=(reply1, reply2), prompt_hashes=(h1, h2),
                prompt_text="\n".join(messages),
                latency_s=clock() - start, cached=cached1 and cached2,
            )
        raise TypeError(f"not a prompt: {prompt!r}")
    except ClientError as exc:
        return SendResult(
            replies=(), prompt_hashes=(),
            prompt_text=prompt.first.text if hasattr(prompt, "first") else prompt.text,
            error_kind=exc.kind, error_detail=exc.detail,
            latency_s=clock() - start,
        )
