import json
import os
import pathlib
import subprocess

import pytest

jsonschema = pytest.importorskip("jsonschema")

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"
FIXTURES = pathlib.Path(os.environ.get("CATLAS_FIXTURE_DIR", ROOT / "fixtures"))
CLI = os.environ.get("CATLAS_CLI")


def validate(instance, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema, format_checker=jsonschema.FormatChecker()).validate(instance)


def test_schemas_are_valid():
    for path in SCHEMAS.glob("*.schema.json"):
        jsonschema.Draft202012Validator.check_schema(json.loads(path.read_text()))


def test_fixtures_match_schemas():
    for path in sorted((FIXTURES / "foliation").glob("*.json")):
        validate(json.loads(path.read_text()), "foliation_fixture")
    for path in sorted(FIXTURES.glob("*charts.json")):
        validate(json.loads(path.read_text()), "torus_charts")


@pytest.mark.skipif(CLI is None, reason="CATLAS_CLI not set")
@pytest.mark.parametrize(
    "args, kind",
    [
        (["audit", "psi-normalizer", "--samples", "5", "--include-samples"], "audit"),
        (["audit", "neck-involution"], "audit"),
        (["foliation", "{fx}/foliation/round-sphere.json"], "foliation"),
        (["foliation", "{fx}/foliation/gamma-minus-loop.json"], "foliation"),
        (["foliation", "{fx}/foliation/overtwisted-r4.json"], "foliation"),
        (["cover", "--dim", "2", "--window", "-2", "2"], "cover"),
        (["torus-cover", "--charts", "{fx}/s1-2charts.json"], "torus_cover"),
        (["bounds", "--descriptor", '{"class": "torus", "dim": 3}'], "bounds"),
        (["bounds", "--descriptor", '{"class": "S3", "contact": "overtwisted"}'], "bounds"),
        (["star-shaped", "--domain", "cuboids", "--n", "1", "--count", "2", "--samples", "10"], "star_shaped"),
        (["star-shaped", "--domain", "shell"], "star_shaped"),
    ],
)
def test_cli_reports_match_schemas(args, kind):
    args = [a.replace("{fx}", str(FIXTURES)) for a in args]
    out = subprocess.run([CLI, "--seed", "5", *args], capture_output=True, text=True)
    assert out.returncode in (0, 2, 3), out.stderr
    report = json.loads(out.stdout)
    assert report["kind"] == kind
    validate(report, kind)
    if kind == "bounds":
        validate(report["descriptor"], "descriptor")
