#!/usr/bin/env python3
"""Capture canned query responses from a local offline service.

Starts `geode serve --offline` on a spare port, replays the demo
queries, and stores the raw response bodies under tests/golden/.
The stored bytes are exactly what the service puts on the wire, so
UI tests render from them without a running backend.
"""

import json
import pathlib
import subprocess
import sys
import time
import urllib.error
import urllib.request

PORT = 18734
BASE = f"http://127.0.0.1:{PORT}"
OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"

CAPTURES = [
    ("aqi", "What is the air quality like in the city known for the Qutub Minar?"),
    ("rain", "Where does it rain more, Atlanta or Chicago?"),
    ("peak", "Find the highest peak in Telengana"),
    ("correlation", "show me the correlation between precipitation and air quality in Bangladesh?"),
    ("threshold", "Which parts of Telangana have both high elevation and high precipitation?"),
    ("impute", "Impute the missing air quality readings around Delhi"),
    # Unplannable on purpose: exercises the error body shape.
    ("failure", "What is the tallest building in Ulaanbaatar?"),
]


def wait_for_health(deadline_s=20.0):
    start = time.monotonic()
    while time.monotonic() - start < deadline_s:
        try:
            with urllib.request.urlopen(BASE + "/api/health", timeout=2) as res:
                if res.status == 200:
                    return
        except (urllib.error.URLError, ConnectionError, OSError):
            time.sleep(0.2)
    raise RuntimeError("service did not come up")


def post_query(query):
    req = urllib.request.Request(
        BASE + "/api/query",
        data=json.dumps({"query": query}).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req, timeout=30) as res:
            return res.status, res.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    proc = subprocess.Popen(
        ["geode", "serve", "--offline", "--port", str(PORT)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    manifest = []
    try:
        wait_for_health()
        for name, query in CAPTURES:
            status, body = post_query(query)
            json.loads(body)  # refuse to store anything unparseable
            (OUT / f"{name}.json").write_bytes(body)
            manifest.append({"file": f"{name}.json", "query": query, "status": status})
            print(f"{name}: HTTP {status}, {len(body)} bytes")
    finally:
        proc.terminate()
        proc.wait(timeout=10)
    (OUT / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    print(f"wrote {len(manifest)} documents to {OUT}")


if __name__ == "__main__":
    sys.exit(main())
