from pathlib import Path

import pytest

from lpproof.dk import parse_dk, print_dk
from lpproof.drv import parse_trace
from lpproof.kernel import check_document
from lpproof.translate import translate_trace

GOLDEN = Path(__file__).parent / "golden"


def golden_traces():
    return sorted(GOLDEN.glob("*.drv"))


def run_trace(text: str, via_text: bool = True):
    """Translate, print, re-read and check; returns (script, dk text, check report)."""
    script = translate_trace(parse_trace(text))
    dk = print_dk(script.items())
    items = parse_dk(dk) if via_text else script.items()
    return script, dk, check_document(items)


@pytest.fixture
def golden_dir():
    return GOLDEN


def equation_flips(text: str):
    """Yield ``(label, trace)`` with one equation literal of one step flipped."""
    from dataclasses import replace

    from lpproof.drv import print_trace
    from lpproof.fol import Clause

    doc = parse_trace(text)
    for k, step in enumerate(doc.steps):
        for i, lit in enumerate(step.conclusion.literals):
            if not lit.is_equation:
                continue
            lits = list(step.conclusion.literals)
            lits[i] = lit.flipped()
            concl = Clause(tuple(lits), step.conclusion.term_vars, step.conclusion.sort_vars)
            steps = list(doc.steps)
            steps[k] = replace(step, conclusion=concl)
            yield f"step {step.id} literal {i}", print_trace(replace(doc, steps=steps))



# criterion number -> [title, detail, status]
ACCEPTANCE: dict = {}


def _criterion(item):
    return int(item.name.split("_")[2]) if item.name.startswith("test_criterion_") else None


@pytest.fixture
def verdict(request):
    """``verdict(title, detail)`` names the acceptance criterion under test."""
    n = _criterion(request.node)

    def record(title: str, detail: str = ""):
        ACCEPTANCE[n] = [title, detail, None]
    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    n = _criterion(item)
    if n is None or (rep.when != "call" and not rep.skipped):
        return
    entry = ACCEPTANCE.setdefault(n, [item.name, "", None])
    if rep.skipped:
        entry[2] = "SKIP"
        if not entry[1] and isinstance(rep.longrepr, tuple):
            entry[1] = rep.longrepr[2]
    else:
        entry[2] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, detail, status = ACCEPTANCE[n]
        line = f"criterion {n:2d} {status or 'FAIL'}: {title}"
        terminalreporter.write_line(line + (f" | {detail}" if detail else ""))
