# utils/helpers.py
import json
from pathlib import Path

from filelock import FileLock, Timeout

from infinikit.errors import BadInputError, LockTimeoutError

LOCK_TIMEOUT = 60


def dump_doc(doc: dict) -> str:
    """Keyed structured document: sorted-key JSON, byte-stable across runs."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise BadInputError(f"cannot read {path}: {e}") from None


def inline_or_file(value: str) -> str:
    """`{1:0.5}` stays as given; anything that names an existing file is read."""
    candidate = Path(value)
    if not value.lstrip().startswith("{") and candidate.is_file():
        return read_text(candidate)
    return value


def _lock_for(path: Path) -> Path:
    return path.with_name(path.name + ".lock")


def write_data_file(path: str | Path, rows: list[tuple[int, float]], digits: int = 12) -> Path:
    """(Process-safe) Writes `N gamma_N` rows for external plotting."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    lock_file = _lock_for(target)
    body = "".join(f"{n} {format(g, f'.{digits}g')}\n" for n, g in rows)
    try:
        with FileLock(str(lock_file), timeout=LOCK_TIMEOUT):
            target.write_text(body, encoding="utf-8")
    except Timeout:
        raise LockTimeoutError(
            f"could not acquire lock '{lock_file.name}' within {LOCK_TIMEOUT}s"
        ) from None
    return target


def read_data_file(path: str | Path) -> list[tuple[int, float]]:
    rows = []
    for line in read_text(path).splitlines():
        if not line.strip():
            continue
        n, g = line.split()
        rows.append((int(n), float(g)))
    return rows
