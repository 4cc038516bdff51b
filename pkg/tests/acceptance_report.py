"""Shared list of one-line acceptance outcomes, printed at the end of a pytest run."""
LINES: list[str] = []


def report(number: int, label: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {label}"
    if detail:
        line += f": {detail}"
    LINES.append(line)
    print(line)
