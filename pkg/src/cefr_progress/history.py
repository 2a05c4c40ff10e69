"""Git history mining.

Walks the default branch's first-parent chain of a repository and emits one
CommitRecord per non-merge commit, carrying the before/after texts of every
changed ``.py`` file.  All repository access goes through the ``git``
executable: one ``git log --name-status`` pass for the chain and a
persistent ``git cat-file --batch`` subprocess for blob contents.

Identity and ordering decisions:

* Contributors are keyed by the git *author* by default (``committer``
  available as a mode); the anonymized ID is the first 8 hex digits of
  SHA-256 over the lowercased, trimmed email.
* Merge commits are skipped outright; the first-parent chain keeps the
  history linear so each commit diffs against exactly one parent.
* Renames count as modifications with the before text taken from the old
  path; blobs containing NUL bytes are treated as absent (binary policy).
"""

from __future__ import annotations

import hashlib
import logging
import os
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

_FIELD_SEP = "\x1f"
_RECORD_SEP = "\x1e"

CACHE_ENV_VAR = "CEFR_PROGRESS_CACHE"


class RepoError(Exception):
    """Repository access failure.

    `kind` is one of "clone_failed", "shallow", "empty", "bad_sha".
    """

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass(frozen=True)
class RepoSpec:
    """Where the repository comes from and where clones may be cached."""

    source: str
    workdir: Path | None = None


@dataclass(frozen=True)
class ContributorId:
    raw_name: str
    raw_email: str
    anon_id: str

    @classmethod
    def from_identity(cls, name: str, email: str) -> "ContributorId":
        normalized = email.strip().lower()
        digest = hashlib.sha256(normalized.encode("utf-8")).hexdigest()
        return cls(raw_name=name, raw_email=email, anon_id=digest[:8])


@dataclass(frozen=True)
class FileChange:
    """One changed .py file within a commit.

    `path` is the repository-relative path after the commit (the old path for
    deletions); `old_path` is set for renames.  Absent texts mean the file
    did not exist on that side, or the blob was binary.
    """

    path: str
    change_type: str  # added | modified | deleted | renamed
    before_text: str | None = None
    after_text: str | None = None
    old_path: str | None = None


@dataclass(frozen=True)
class CommitRecord:
    sha: str
    parent_sha: str | None
    contributor: ContributorId
    timestamp: int
    changes: tuple[FileChange, ...] = field(default=())


class Repo:
    """Read handle on a local git repository.

    Holds one lazily started ``cat-file --batch`` subprocess for blob reads;
    concurrent readers should each hold their own Repo.
    """

    def __init__(self, path: Path):
        self.path = Path(path)
        self._batch: subprocess.Popen | None = None

    def git(self, *args: str) -> str:
        proc = subprocess.run(
            ["git", "-C", str(self.path), "-c", "core.quotepath=off", *args],
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            raise RepoError("clone_failed", f"git {args[0]} failed: {proc.stderr.strip()}")
        return proc.stdout

    def _batch_proc(self) -> subprocess.Popen:
        if self._batch is None or self._batch.poll() is not None:
            self._batch = subprocess.Popen(
                ["git", "-C", str(self.path), "cat-file", "--batch"],
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
            )
        return self._batch

    def read_blob(self, sha: str, path: str) -> bytes | None:
        """Raw bytes of `path` at commit `sha`, or None when absent there."""
        proc = self._batch_proc()
        request = f"{sha}:{path}\n".encode("utf-8")
        proc.stdin.write(request)
        proc.stdin.flush()
        header = proc.stdout.readline().decode("utf-8", errors="replace").rstrip("\n")
        if header.endswith(" missing") or header.endswith(" ambiguous"):
            return None
        parts = header.split()
        if len(parts) != 3 or parts[1] != "blob":
            # non-blob object at the path (e.g. a submodule gitlink)
            if len(parts) == 3:
                size = int(parts[2])
                proc.stdout.read(size + 1)
            return None
        size = int(parts[2])
        data = proc.stdout.read(size)
        proc.stdout.read(1)  # trailing newline
        return data

    def close(self) -> None:
        if self._batch is not None and self._batch.poll() is None:
            self._batch.stdin.close()
            self._batch.wait(timeout=10)
        self._batch = None

    def __enter__(self) -> "Repo":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def _cache_root(spec: RepoSpec) -> Path:
    if spec.workdir is not None:
        return Path(spec.workdir)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cefr-progress"


def _assert_not_shallow(repo: Repo) -> None:
    if repo.git("rev-parse", "--is-shallow-repository").strip() == "true":
        raise RepoError("shallow", f"{repo.path} is a shallow clone; full history is required")


def prepare_repo(spec: RepoSpec) -> Repo:
    """Local passthrough for paths; cached bare clone for URLs."""
    candidate = Path(spec.source)
    if candidate.exists():
        probe = subprocess.run(
            ["git", "-C", str(candidate), "rev-parse", "--git-dir"],
            capture_output=True,
            text=True,
        )
        if probe.returncode != 0:
            raise RepoError("clone_failed", f"{spec.source} exists but is not a git repository")
        repo = Repo(candidate)
        _assert_not_shallow(repo)
        return repo

    key = hashlib.sha256(spec.source.encode("utf-8")).hexdigest()[:16]
    clone_dir = _cache_root(spec) / "clones" / key
    if not clone_dir.exists():
        log.info("cloning %s into %s", spec.source, clone_dir)
        clone_dir.parent.mkdir(parents=True, exist_ok=True)
        proc = subprocess.run(
            ["git", "clone", "--bare", spec.source, str(clone_dir)],
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            raise RepoError("clone_failed", f"clone of {spec.source} failed: {proc.stderr.strip()}")
    else:
        log.info("reusing cached clone %s", clone_dir)
    repo = Repo(clone_dir)
    _assert_not_shallow(repo)
    return repo


def _decode_blob(data: bytes | None) -> str | None:
    if data is None or b"\x00" in data:
        return None
    return data.decode("utf-8", errors="replace")


def _parse_name_status(line: str) -> tuple[str, str, str | None] | None:
    """Split one name-status line into (status letter, path, old path)."""
    fields = line.split("\t")
    status = fields[0]
    if status.startswith(("R", "C")) and len(fields) == 3:
        return status[0], fields[2], fields[1]
    if len(fields) == 2:
        return status[0], fields[1], None
    return None


def _change_from_entry(
    repo: Repo, sha: str, parent: str | None, status: str, path: str, old_path: str | None
) -> FileChange | None:
    is_py = path.endswith(".py")
    if status == "A":
        if not is_py:
            return None
        return FileChange(path, "added", after_text=_decode_blob(repo.read_blob(sha, path)))
    if status == "D":
        if not is_py:
            return None
        return FileChange(path, "deleted", before_text=_decode_blob(repo.read_blob(parent, path)))
    if status in ("R", "C"):
        source = old_path if old_path is not None else path
        if status == "C":
            # a copy's source still exists; treat the new file as added
            return FileChange(path, "added", after_text=_decode_blob(repo.read_blob(sha, path))) if is_py else None
        if is_py:
            return FileChange(
                path,
                "renamed",
                before_text=_decode_blob(repo.read_blob(parent, source)),
                after_text=_decode_blob(repo.read_blob(sha, path)),
                old_path=source,
            )
        if source.endswith(".py"):
            # renamed out of .py: the Python file is gone
            return FileChange(source, "deleted", before_text=_decode_blob(repo.read_blob(parent, source)))
        return None
    # M and the rare T (typechange) both mean: same path, new content
    if not is_py:
        return None
    return FileChange(
        path,
        "modified",
        before_text=_decode_blob(repo.read_blob(parent, path)),
        after_text=_decode_blob(repo.read_blob(sha, path)),
    )


def extract_commits(repo: Repo, *, identity: str = "author") -> list[CommitRecord]:
    """CommitRecords for the default branch's first-parent chain, oldest first.

    Merge commits are dropped; every remaining record carries the changed
    .py files with their before/after texts.  `identity` selects whether the
    author or the committer is credited.
    """
    if identity not in ("author", "committer"):
        raise ValueError(f"identity must be 'author' or 'committer', not {identity!r}")
    head = subprocess.run(
        ["git", "-C", str(repo.path), "rev-parse", "--verify", "HEAD"],
        capture_output=True,
        text=True,
    )
    if head.returncode != 0:
        raise RepoError("empty", f"{repo.path} has no commits on its default branch")

    fmt = _RECORD_SEP + _FIELD_SEP.join(["%H", "%P", "%an", "%ae", "%at", "%cn", "%ce"])
    out = repo.git(
        "log", "--first-parent", "--topo-order", "--reverse", "-M",
        "--name-status", f"--format={fmt}", "HEAD",
    )

    records: list[CommitRecord] = []
    for chunk in out.split(_RECORD_SEP):
        if not chunk.strip():
            continue
        header, _, body = chunk.partition("\n")
        sha, parents_raw, a_name, a_email, a_time, c_name, c_email = header.split(_FIELD_SEP)
        parents = parents_raw.split()
        if len(parents) >= 2:
            log.debug("skipping merge commit %s", sha)
            continue
        parent = parents[0] if parents else None
        name, email = (a_name, a_email) if identity == "author" else (c_name, c_email)
        changes: list[FileChange] = []
        for line in body.splitlines():
            if not line.strip():
                continue
            entry = _parse_name_status(line)
            if entry is None:
                log.debug("unrecognized name-status line in %s: %r", sha, line)
                continue
            change = _change_from_entry(repo, sha, parent, *entry)
            if change is not None:
                changes.append(change)
        records.append(
            CommitRecord(
                sha=sha,
                parent_sha=parent,
                contributor=ContributorId.from_identity(name, email),
                timestamp=int(a_time),
                changes=tuple(changes),
            )
        )
    if not records:
        raise RepoError("empty", f"{repo.path} has no non-merge commits")
    return records


def get_version(repo: Repo, path: str, sha: str) -> str | None:
    """Text of `path` at commit `sha`; None when absent there or binary."""
    probe = subprocess.run(
        ["git", "-C", str(repo.path), "rev-parse", "--verify", "--quiet", f"{sha}^{{commit}}"],
        capture_output=True,
        text=True,
    )
    if probe.returncode != 0:
        raise RepoError("bad_sha", f"no such commit: {sha}")
    return _decode_blob(repo.read_blob(sha, path))


def group_by_contributor(commits: list[CommitRecord]) -> dict[ContributorId, list[CommitRecord]]:
    """Partition commits by anon_id, preserving commit order within each group."""
    groups: dict[str, list[CommitRecord]] = {}
    representatives: dict[str, ContributorId] = {}
    for record in commits:
        key = record.contributor.anon_id
        groups.setdefault(key, []).append(record)
        representatives.setdefault(key, record.contributor)
    return {representatives[key]: records for key, records in groups.items()}
