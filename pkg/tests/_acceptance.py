"""Shared record of acceptance outcomes, printed at the end of the run."""
RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} | {detail}"
    RESULTS.append(line)
    print(line)
    return ok
