"""
Golden Files
Fingerprinted reference reports for the verify suites, with unified diffs on change.
"""
import logging
from dataclasses import dataclass
from difflib import unified_diff
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import xxhash
import yaml

from . import GOLDEN_DIR, __version__

logger = logging.getLogger(__name__)

HEADER_PREFIX = '# '


class GoldenStatus(str, Enum):
    MATCH = 'match'
    MISMATCH = 'mismatch'
    NEW = 'new'
    WRITTEN = 'written'


@dataclass
class GoldenResult:
    path: Path
    status: GoldenStatus
    diff: str = ''

    @property
    def failed(self) -> bool:
        return self.status == GoldenStatus.MISMATCH


def compute_fingerprint(body: str) -> str:
    """xxh64 of the whitespace-normalized body."""
    normalized = ' '.join(body.split())
    return xxhash.xxh64(normalized.encode()).hexdigest()


def compute_diff(old_body: str, new_body: str) -> str:
    """Unified diff between the stored golden and the current report."""
    old_lines = old_body.splitlines()
    new_lines = new_body.splitlines()

    diff = unified_diff(old_lines, new_lines, fromfile='golden', tofile='current', lineterm='')
    return '\n'.join(diff)


def golden_body(plain: Dict) -> str:
    """YAML body of a report; the version lives in the header only."""
    body = {k: v for k, v in plain.items() if k != 'version'}
    return yaml.safe_dump(body, sort_keys=False, allow_unicode=True)


def render_golden(body: str) -> str:
    header = [
        f"{HEADER_PREFIX}wlevels golden report",
        f"{HEADER_PREFIX}version: {__version__}",
        f"{HEADER_PREFIX}xxh64: {compute_fingerprint(body)}",
    ]
    return '\n'.join(header) + '\n' + body


def parse_golden(text: str) -> Tuple[Dict[str, str], str]:
    """
    Split a golden file into its header fields and body.

    Returns:
        Tuple of (header dict, body text)
    """
    header: Dict[str, str] = {}
    lines = text.splitlines(keepends=True)
    i = 0
    while i < len(lines) and lines[i].startswith(HEADER_PREFIX):
        key, sep, value = lines[i][len(HEADER_PREFIX):].partition(':')
        if sep:
            header[key.strip()] = value.strip()
        i += 1
    return header, ''.join(lines[i:])


def golden_path(suite: str, name: str, golden_dir: Optional[Path] = None) -> Path:
    return Path(golden_dir or GOLDEN_DIR) / suite / f"{name}.yaml"


def check_golden(suite: str, name: str, body: str, golden_dir: Optional[Path] = None,
                 regenerate: bool = False) -> GoldenResult:
    """
    Compare a report body with its committed golden.

    A missing golden is reported as new, and is only written when regenerate
    is set.
    """
    path = golden_path(suite, name, golden_dir)
    if regenerate:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(render_golden(body), encoding='utf-8')
        logger.info(f"Wrote golden {path}")
        return GoldenResult(path, GoldenStatus.WRITTEN)

    if not path.exists():
        logger.info(f"No golden at {path}")
        return GoldenResult(path, GoldenStatus.NEW)

    header, stored = parse_golden(path.read_text(encoding='utf-8'))
    stored_hash = compute_fingerprint(stored)
    if header.get('xxh64') and header['xxh64'] != stored_hash:
        logger.warning(f"Golden {path} was edited after generation (fingerprint mismatch)")
    if stored_hash == compute_fingerprint(body):
        return GoldenResult(path, GoldenStatus.MATCH)

    logger.warning(f"Golden {path} differs from the current report")
    return GoldenResult(path, GoldenStatus.MISMATCH, compute_diff(stored, body))


def combine_results(results: List[GoldenResult], path: Path) -> GoldenResult:
    """One status for a directory of goldens: any mismatch wins, then any new file."""
    statuses = {r.status for r in results}
    if GoldenStatus.MISMATCH in statuses:
        status = GoldenStatus.MISMATCH
    elif GoldenStatus.NEW in statuses or not statuses:
        status = GoldenStatus.NEW
    elif statuses == {GoldenStatus.WRITTEN}:
        status = GoldenStatus.WRITTEN
    else:
        status = GoldenStatus.MATCH
    diff = '\n'.join(r.diff for r in results if r.diff)
    return GoldenResult(path, status, diff)
