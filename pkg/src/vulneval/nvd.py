"""NVD CVE API (JSON 2.0) client and record mapping.

The client speaks the paged ``/rest/json/cves/2.0`` endpoint with polite
rate limiting and backoff; a file loader accepts pre-downloaded response
documents so everything downstream stays testable without network access.
"""

from __future__ import annotations

import json
import logging
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterator

import requests

from .cvss import CvssError, CvssVector, parse_vector

logger = logging.getLogger(__name__)

DEFAULT_ENDPOINT = "https://services.nvd.nist.gov/rest/json/cves/2.0"
MAX_PAGE_SIZE = 2000
_RETRYABLE_STATUS = frozenset({403, 429, 500, 502, 503, 504})

_CVE_ID_RE = re.compile(r"^CVE-\d{4}-\d{4,}$")


class IngestError(Exception):
    """Base class for ingestion failures."""


class NetworkError(IngestError):
    """Transport-level failure after retries were exhausted."""


class RateLimited(IngestError):
    """The API kept answering 403/429 after every retry."""


class SchemaError(IngestError):
    """A record (or line) does not match the expected shape."""


@dataclass(frozen=True)
class CveRecord:
    """One CVE as used for pretraining-document rendering."""

    cve_id: str
    descriptions: tuple[str, ...]
    base_temporal_vector: CvssVector | None = None
    affected_product: str | None = None
    highest_affected_version: str | None = None
    lowest_unaffected_version: str | None = None
    mitigation: str | None = None

    def __post_init__(self):
        if not _CVE_ID_RE.match(self.cve_id):
            raise SchemaError(f"not a CVE id: {self.cve_id!r}")
        if not self.descriptions:
            raise SchemaError(f"{self.cve_id} has no description")


def _first_vector_string(metrics: dict) -> str | None:
    for key in ("cvssMetricV31", "cvssMetricV30", "cvssMetricV2"):
        for entry in metrics.get(key) or []:
            vector = (entry.get("cvssData") or {}).get("vectorString")
            if vector:
                return vector
    return None


def _affected_versions(cve: dict) -> tuple[str | None, str | None, str | None]:
    """Best-effort product/version bounds from the first vulnerable CPE."""
    for configuration in cve.get("configurations") or []:
        for node in configuration.get("nodes") or []:
            for match in node.get("cpeMatch") or []:
                if not match.get("vulnerable"):
                    continue
                criteria = match.get("criteria", "")
                parts = criteria.split(":")
                product = parts[4].replace("_", " ") if len(parts) > 4 else None
                if product in ("*", "-", ""):
                    product = None
                highest = match.get("versionEndIncluding")
                unaffected = match.get("versionEndExcluding")
                if product:
                    return product, highest, unaffected
    return None, None, None


def record_from_nvd(item: dict) -> CveRecord:
    """Map one ``vulnerabilities[]`` element of an NVD 2.0 response."""
    if not isinstance(item, dict) or "cve" not in item:
        raise SchemaError("vulnerability entry lacks a 'cve' object")
    cve = item["cve"]
    cve_id = cve.get("id")
    if not isinstance(cve_id, str):
        raise SchemaError("cve object lacks an id")
    descriptions = tuple(
        d["value"]
        for d in cve.get("descriptions") or []
        if isinstance(d, dict) and d.get("lang") == "en" and d.get("value")
    )
    vector = None
    vector_text = _first_vector_string(cve.get("metrics") or {})
    if vector_text:
        try:
            vector = parse_vector(vector_text)
        except CvssError as exc:
            logger.warning("%s: unparseable vector %r (%s)", cve_id, vector_text, exc)
    product, highest, unaffected = _affected_versions(cve)
    return CveRecord(
        cve_id=cve_id,
        descriptions=descriptions,
        base_temporal_vector=vector,
        affected_product=product,
        highest_affected_version=highest,
        lowest_unaffected_version=unaffected,
    )


def _map_page(payload: dict) -> list[CveRecord]:
    if "vulnerabilities" not in payload:
        raise SchemaError("response lacks a 'vulnerabilities' array")
    records = []
    for item in payload["vulnerabilities"]:
        try:
            records.append(record_from_nvd(item))
        except SchemaError as exc:
            logger.warning("skipping malformed NVD record: %s", exc)
    return records


@dataclass
class NvdClient:
    """Paged CVE fetching with rate limiting and retry-with-backoff."""

    endpoint: str = DEFAULT_ENDPOINT
    api_key: str | None = None
    request_delay: float = 0.6
    max_retries: int = 4
    backoff_base: float = 1.0
    timeout: float = 30.0
    session: requests.Session = field(default_factory=requests.Session)

    def _get(self, params: dict) -> dict:
        headers = {"apiKey": self.api_key} if self.api_key else {}
        last_status = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_base * 2 ** (attempt - 1))
            try:
                response = self.session.get(
                    self.endpoint, params=params, headers=headers, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_status = exc
                continue
            if response.status_code == 200:
                try:
                    return response.json()
                except ValueError as exc:
                    raise SchemaError(f"response is not JSON: {exc}") from exc
            last_status = response.status_code
            if response.status_code not in _RETRYABLE_STATUS:
                raise NetworkError(f"NVD request failed with {response.status_code}")
            logger.warning(
                "NVD answered %s, retry %d/%d", response.status_code, attempt + 1,
                self.max_retries,
            )
        if last_status in (403, 429):
            raise RateLimited(f"still rate limited after {self.max_retries} retries")
        raise NetworkError(f"giving up after {self.max_retries} retries: {last_status}")

    def fetch_cve_page(self, start_index: int = 0, page_size: int = MAX_PAGE_SIZE) -> list[CveRecord]:
        if not 0 < page_size <= MAX_PAGE_SIZE:
            raise ValueError(f"page_size must be in 1..{MAX_PAGE_SIZE}")
        payload = self._get({"startIndex": start_index, "resultsPerPage": page_size})
        return _map_page(payload)

    def fetch_all(self, page_size: int = MAX_PAGE_SIZE, limit: int | None = None) -> Iterator[CveRecord]:
        """Iterate pages until totalResults (or ``limit``) is reached."""
        start = yielded = 0
        while True:
            payload = self._get({"startIndex": start, "resultsPerPage": page_size})
            records = _map_page(payload)
            for record in records:
                yield record
                yielded += 1
                if limit is not None and yielded >= limit:
                    return
            total = payload.get("totalResults", 0)
            start += payload.get("resultsPerPage") or page_size
            if start >= total or not records:
                return
            time.sleep(self.request_delay)


def load_cve_file(path: str | Path) -> list[CveRecord]:
    """Load a pre-downloaded NVD 2.0 response document."""
    payload: Any = json.loads(Path(path).read_text())
    if isinstance(payload, list):  # bare list of vulnerability entries
        payload = {"vulnerabilities": payload}
    return _map_page(payload)
