"""Shared fixtures plus the acceptance summary hook.

Acceptance tests register one line per criterion through `record_criterion`;
the terminal summary prints them after the run so the pass/fail ledger is
visible without -s.
"""

import copy

import pytest

ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    suffix = f" ({detail})" if detail else ""
    ACCEPTANCE_RESULTS.append((status, f"{name}{suffix}"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for status, name in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{status}  {name}")


# --- OpenAPI response validation -------------------------------------------

def _rewrite_refs(node):
    if isinstance(node, dict):
        out = {}
        for key, value in node.items():
            if key == "$ref" and isinstance(value, str):
                out[key] = value.replace("#/components/schemas/", "#/$defs/")
            else:
                out[key] = _rewrite_refs(value)
        return out
    if isinstance(node, list):
        return [_rewrite_refs(v) for v in node]
    return node


def response_schema(openapi: dict, method: str, path: str, status: int = 200) -> dict:
    """Self-contained JSON Schema for one endpoint's declared response body."""
    op = openapi["paths"][path][method.lower()]
    body = op["responses"][str(status)]["content"]["application/json"]["schema"]
    schema = _rewrite_refs(copy.deepcopy(body))
    components = openapi.get("components", {}).get("schemas", {})
    schema["$defs"] = {name: _rewrite_refs(copy.deepcopy(s)) for name, s in components.items()}
    return schema


def validate_response(openapi: dict, method: str, path: str, status: int, payload) -> None:
    import jsonschema

    schema = response_schema(openapi, method, path, status)
    jsonschema.validate(payload, schema)


@pytest.fixture(scope="session")
def fixture_bundle():
    from cropadvisor.fixtures import comparative_fixture_bundle

    return comparative_fixture_bundle()
