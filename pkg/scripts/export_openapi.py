#!/usr/bin/env python3
"""Write the service's OpenAPI document to docs/openapi.json.

The committed copy is the published contract the web client and its
contract tests build against; re-run this after changing any endpoint.
"""

import json
from pathlib import Path

from cropadvisor.fixtures import comparative_fixture_bundle
from cropadvisor.service import create_app


def main() -> None:
    app = create_app(bundle=comparative_fixture_bundle())
    doc = app.openapi()
    out = Path(__file__).resolve().parents[1] / "docs" / "openapi.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(doc['paths'])} paths)")


if __name__ == "__main__":
    main()
