import threading
from typing import Any, Callable, Dict, Hashable, Optional

from configuration.configuration import logger

_MISSING = object()


class MemoTable:
    """Memo whose lookups and counters are serialized; ``compute`` runs unlocked and the first stored value wins."""

    def __init__(self, name: str):
        self.name = name
        self._data: Dict[Hashable, Any] = {}
        self._lock = threading.Lock()
        self.stats = {"hits": 0, "misses": 0, "stored": 0}

    def get_or_compute(self, key: Hashable, compute: Callable[[], Any]) -> Any:
        with self._lock:
            value = self._data.get(key, _MISSING)
            if value is not _MISSING:
                self.stats["hits"] += 1
                return value
            self.stats["misses"] += 1
        value = compute()
        with self._lock:
            if key not in self._data:
                self._data[key] = value
                self.stats["stored"] += 1
            return self._data[key]

    def __len__(self) -> int:
        return len(self._data)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


class PsiMemory:
    """Memo tables of one Ψ computation: l.s.o.p. minors and Ψ values."""

    def __init__(self, minors: Optional[MemoTable] = None):
        self.minors = minors if minors is not None else MemoTable("minors")
        self.psi = MemoTable("psi")

    def get_stats(self) -> Dict[str, Dict[str, int]]:
        return {"minors": dict(self.minors.stats), "psi": dict(self.psi.stats)}

    def log_stats(self) -> None:
        stats = self.get_stats()
        logger.debug(
            f"🔍 Memo usage: minors {stats['minors']['hits']} hits / {stats['minors']['misses']} misses, "
            f"Ψ {stats['psi']['hits']} hits / {stats['psi']['misses']} misses"
        )
