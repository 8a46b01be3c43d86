from pathlib import Path

import pytest

FIGDIR = Path(__file__).resolve().parent.parent
GOLDEN = FIGDIR.parent / "golden"


@pytest.fixture
def golden():
    if not GOLDEN.is_dir() or not any(GOLDEN.glob("*.csv")):
        pytest.skip("golden CSVs not generated (run tools/make_golden.py)")
    return GOLDEN


def write_csv(path, header, rows, provenance=True):
    lines = []
    if provenance:
        lines.append('# provenance: {"spec_sha256": "test", "version": "0"}')
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path
