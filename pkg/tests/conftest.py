import pytest

from pamine.corpus import AppraisalRecord, PeerComment

PAPER_PEER_COMMENTS = (
    "vast knowledge on different technologies",
    "His experience and wast knowledge mixed with his positive attitude, "
    "willingness to teach and listen and his humble nature.",
    "Approachable, Knowlegeable and is of helping nature.",
    "Dedication, Technical expertise and always supportive",
    "Effective communication and team player",
)

PAPER_GOLD_PHRASES = frozenset({
    "humble nature", "effective communication", "technical expertise",
    "always supportive", "vast knowledge",
})


@pytest.fixture
def worked_example_record() -> AppraisalRecord:
    return AppraisalRecord(
        employee_id="emp-1",
        supervisor_text="",
        peer_comments=tuple(
            PeerComment(f"p{i}", text)
            for i, text in enumerate(PAPER_PEER_COMMENTS, start=1)
        ),
    )


@pytest.fixture
def tiny_embeddings(tmp_path):
    """Embedding file with a few hand-placed 2-D vectors."""
    path = tmp_path / "vectors.txt"
    path.write_text(
        "knowledge 1.0 0.0\n"
        "expertise 0.99 0.14\n"
        "skill 0.95 0.31\n"
        "team 0.0 1.0\n"
        "coach 0.14 0.99\n"
        "customer -1.0 0.2\n",
        encoding="utf-8",
    )
    return path


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one line per acceptance criterion at the end of a run."""
    lines = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            if getattr(report, "when", "call") not in ("call", "setup"):
                continue
            name = nodeid.split("::")[-1]
            if status == "passed" and report.when != "call":
                continue
            lines[name] = "PASS" if status == "passed" else "FAIL"
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name in sorted(lines):
            terminalreporter.write_line(f"{lines[name]:4s}  {name}")
