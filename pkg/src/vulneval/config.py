"""Pipeline configuration: one document, validated, flags override.

Secrets (NVD API key, backend URL) may come from the environment:
``VULNEVAL_NVD_API_KEY`` and ``VULNEVAL_BACKEND_URL``.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    assets: str | None = None
    notifications: str | None = None
    evaluations: str | None = None
    output_dir: str = "out"
    seed: int = 20240601
    backend_url: str | None = None
    backend_kind: str = "http"
    backend_context_window: int | None = None
    tokenizer: str = "bpe"
    chars_per_token: int = 4
    batch_token_threshold: int = 920
    max_record_tokens: int = 1048
    beam_size: int = 3
    temperature: float = 0.0
    top_p: float = 1.0
    service_port: int = 8080
    service_storage_dir: str = "review-data"
    nvd_endpoint: str = "https://services.nvd.nist.gov/rest/json/cves/2.0"
    nvd_page_size: int = 2000
    nvd_request_delay: float = 0.6
    max_workers: int = 4
    group_split_by_key: bool = True

    extra: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.extra:
            raise ConfigError(
                "unknown configuration keys: " + ", ".join(sorted(self.extra))
            )
        if self.backend_kind not in ("http", "stub"):
            raise ConfigError(f"backend_kind must be http or stub, not {self.backend_kind!r}")
        if self.batch_token_threshold <= 0 or self.max_record_tokens <= 0:
            raise ConfigError("token thresholds must be positive")
        if not self.backend_url:
            self.backend_url = os.environ.get("VULNEVAL_BACKEND_URL")

    @property
    def nvd_api_key(self) -> str | None:
        return os.environ.get("VULNEVAL_NVD_API_KEY")

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides) -> "Config":
        """Read YAML or JSON (by extension), then apply flag overrides."""
        data: dict = {}
        if path is not None:
            text = Path(path).read_text(encoding="utf-8")
            if str(path).endswith(".json"):
                data = json.loads(text)
            else:
                data = yaml.safe_load(text) or {}
            if not isinstance(data, dict):
                raise ConfigError("configuration document must be a mapping")
        data.update({k: v for k, v in overrides.items() if v is not None})
        known = {f.name for f in dataclasses.fields(cls)} - {"extra"}
        extra = {k: v for k, v in data.items() if k not in known}
        kwargs = {k: v for k, v in data.items() if k in known}
        return cls(extra=extra, **kwargs)
