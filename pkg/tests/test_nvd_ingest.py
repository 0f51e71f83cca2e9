"""NVD client behaviour against a local stub server, and record mapping."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from vulneval import nvd

from .conftest import SAMPLEDATA


class _StubHandler(BaseHTTPRequestHandler):
    """Serves scripted (status, payload) responses in order."""

    script: list = []
    calls: list = []

    def do_GET(self):
        _StubHandler.calls.append(self.path)
        status, payload = self.script[min(len(self.calls) - 1, len(self.script) - 1)]
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):  # silence
        pass


@pytest.fixture
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _StubHandler.script = []
    _StubHandler.calls = []
    yield server, f"http://127.0.0.1:{server.server_port}/cves"
    server.shutdown()


def _page(*vulns, total=None):
    return {
        "resultsPerPage": len(vulns),
        "startIndex": 0,
        "totalResults": total if total is not None else len(vulns),
        "vulnerabilities": list(vulns),
    }


def _vuln(cve_id, description="Some overflow happens.", vector="CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"):
    return {
        "cve": {
            "id": cve_id,
            "descriptions": [{"lang": "en", "value": description}],
            "metrics": {"cvssMetricV31": [{"cvssData": {"vectorString": vector}}]},
        }
    }


class TestFetched:
    def test_two_records_with_parsed_vectors(self, stub_server):
        _, url = stub_server
        _StubHandler.script = [(200, _page(_vuln("CVE-2024-0001"), _vuln("CVE-2024-0002")))]
        client = nvd.NvdClient(endpoint=url, request_delay=0)
        records = client.fetch_cve_page(page_size=10)
        assert [r.cve_id for r in records] == ["CVE-2024-0001", "CVE-2024-0002"]
        assert all(r.base_temporal_vector is not None for r in records)

    def test_malformed_record_skipped(self, stub_server, caplog):
        _, url = stub_server
        good = _vuln("CVE-2024-0001")
        bad = {"cve": {"id": "CVE-2024-0002"}}  # no descriptions
        worse = {"note": "not a cve at all"}
        _StubHandler.script = [(200, _page(good, bad, worse))]
        client = nvd.NvdClient(endpoint=url, request_delay=0)
        with caplog.at_level("WARNING"):
            records = client.fetch_cve_page(page_size=10)
        assert [r.cve_id for r in records] == ["CVE-2024-0001"]
        assert sum("malformed" in m for m in caplog.messages) == 2

    def test_403_then_200_retries(self, stub_server):
        _, url = stub_server
        _StubHandler.script = [(403, {}), (200, _page(_vuln("CVE-2024-0003")))]
        client = nvd.NvdClient(endpoint=url, request_delay=0, backoff_base=0.01)
        records = client.fetch_cve_page(page_size=5)
        assert len(records) == 1
        assert len(_StubHandler.calls) == 2

    def test_rate_limited_after_retries(self, stub_server):
        _, url = stub_server
        _StubHandler.script = [(429, {})]
        client = nvd.NvdClient(endpoint=url, request_delay=0, max_retries=2, backoff_base=0.01)
        with pytest.raises(nvd.RateLimited):
            client.fetch_cve_page(page_size=5)
        assert len(_StubHandler.calls) == 3

    def test_non_retryable_status(self, stub_server):
        _, url = stub_server
        _StubHandler.script = [(404, {})]
        client = nvd.NvdClient(endpoint=url, request_delay=0, backoff_base=0.01)
        with pytest.raises(nvd.NetworkError):
            client.fetch_cve_page(page_size=5)
        assert len(_StubHandler.calls) == 1

    def test_page_size_limit(self, stub_server):
        _, url = stub_server
        client = nvd.NvdClient(endpoint=url)
        with pytest.raises(ValueError):
            client.fetch_cve_page(page_size=2001)


class TestRecordMapping:
    def test_sample_file_round_trip(self):
        records = nvd.load_cve_file(SAMPLEDATA / "nvd_page.json")
        assert [r.cve_id for r in records] == [
            "CVE-2023-38545", "CVE-2012-1823", "CVE-2024-30303",
        ]
        curl = records[0]
        assert curl.affected_product == "curl"
        assert curl.highest_affected_version == "8.3.0"
        assert curl.lowest_unaffected_version == "8.4.0"
        assert curl.base_temporal_vector.version.value == "3.1"
        php = records[1]
        assert len(php.descriptions) == 2
        assert php.base_temporal_vector.version.value == "2.0"

    def test_bad_cve_id_rejected(self):
        with pytest.raises(nvd.SchemaError):
            nvd.CveRecord(cve_id="NOT-A-CVE", descriptions=("x",))

    def test_description_required(self):
        with pytest.raises(nvd.SchemaError):
            nvd.CveRecord(cve_id="CVE-2024-0001", descriptions=())
