"""Chat-completion provider abstraction.

Live mode posts to an OpenAI-style endpoint; replay mode serves recorded
transcripts and touches no network, which is how every test and the CI
generation path run.  Transcript entries pair a digest of the canonical
request with the recorded response text.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path


class ProviderError(Exception):
    pass


class ReplayMismatch(ProviderError):
    pass


@dataclass
class ProviderConfig:
    mode: str = "replay"  # live | replay
    endpoint: str = ""
    model: str = ""
    temperature: float = 0.0
    timeout: float = 60.0
    transcript: str | None = None
    api_key_env: str = "VERIPG_API_KEY"

    @classmethod
    def from_file(cls, path: str | Path) -> "ProviderConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        allowed = {"mode", "endpoint", "model", "temperature", "timeout", "transcript", "api_key_env"}
        unknown = set(doc) - allowed
        if unknown:
            raise ProviderError(f"unknown provider config keys: {sorted(unknown)}")
        return cls(**doc)

    def build(self) -> "Provider":
        if self.mode == "replay":
            if not self.transcript:
                raise ProviderError("replay mode requires a transcript path")
            return ReplayProvider.from_file(self.transcript)
        if self.mode == "live":
            key = os.environ.get(self.api_key_env, "")
            if not self.endpoint or not key:
                raise ProviderError(
                    f"live mode requires an endpoint and the {self.api_key_env} environment variable"
                )
            return LiveProvider(self.endpoint, self.model, key, self.temperature, self.timeout)
        raise ProviderError(f"unknown provider mode {self.mode!r}")


def request_digest(messages: list[dict]) -> str:
    canonical = json.dumps(messages, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


class Provider:
    def complete(self, messages: list[dict]) -> str:
        raise NotImplementedError


class LiveProvider(Provider):
    def __init__(self, endpoint: str, model: str, api_key: str, temperature: float, timeout: float):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.temperature = temperature
        self.timeout = timeout

    def complete(self, messages: list[dict]) -> str:
        import requests

        try:
            resp = requests.post(
                self.endpoint,
                json={"model": self.model, "messages": messages, "temperature": self.temperature},
                headers={"Authorization": f"Bearer {self.api_key}"},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            body = resp.json()
        except Exception as err:  # network/auth/shape problems all surface the same way
            raise ProviderError(f"provider request failed: {err}") from err
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as err:
            raise ProviderError(f"malformed provider response: {err}") from err


class ReplayProvider(Provider):
    """Serves a recorded transcript in order, verifying request digests."""

    def __init__(self, entries: list[dict], source: str = "<memory>"):
        self.entries = entries
        self.source = source
        self.cursor = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "ReplayProvider":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(doc["entries"], source=str(path))

    def complete(self, messages: list[dict]) -> str:
        if self.cursor >= len(self.entries):
            raise ReplayMismatch(f"{self.source}: transcript exhausted after {self.cursor} requests")
        entry = self.entries[self.cursor]
        digest = request_digest(messages)
        if entry["request_digest"] != digest:
            raise ReplayMismatch(
                f"{self.source}: request {self.cursor} digest {digest} does not match "
                f"recorded {entry['request_digest']}"
            )
        self.cursor += 1
        return entry["response_text"]


class ScriptedProvider(Provider):
    """Returns canned responses in order; used to record transcripts."""

    def __init__(self, responses: list[str]):
        self.responses = list(responses)
        self.requests: list[list[dict]] = []
        self.cursor = 0

    def complete(self, messages: list[dict]) -> str:
        if self.cursor >= len(self.responses):
            raise ProviderError("scripted provider ran out of responses")
        self.requests.append(messages)
        text = self.responses[self.cursor]
        self.cursor += 1
        return text


class RecordingProvider(Provider):
    """Wraps another provider, capturing a replayable transcript."""

    def __init__(self, inner: Provider):
        self.inner = inner
        self.entries: list[dict] = []

    def complete(self, messages: list[dict]) -> str:
        text = self.inner.complete(messages)
        self.entries.append({"request_digest": request_digest(messages), "response_text": text})
        return text

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps({"entries": self.entries}, indent=2) + "\n", encoding="utf-8"
        )
