# services/basis_cache.py
import threading
from collections import OrderedDict
from typing import Optional, Tuple

from middleware.metrics import BASIS_CACHE
from config import get_settings
from models.ring import Polynomial, PolynomialRing

CacheKey = Tuple[PolynomialRing, Tuple[Polynomial, ...]]


class BasisCache:
    """Bounded LRU of reduced Groebner bases keyed by ring and generator tuple"""

    def __init__(self, max_entries: Optional[int] = None):
        self._max_entries = max_entries
        self.cache: "OrderedDict[CacheKey, Tuple[Polynomial, ...]]" = OrderedDict()
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    @property
    def max_entries(self) -> int:
        """Explicit bound, else the active settings' basis_cache_size"""
        if self._max_entries is not None:
            return self._max_entries
        return get_settings().basis_cache_size

    def get(self, key: CacheKey) -> Optional[Tuple[Polynomial, ...]]:
        with self._lock:
            basis = self.cache.get(key)
            if basis is None:
                self.misses += 1
                BASIS_CACHE.labels(result="miss").inc()
                return None
            self.cache.move_to_end(key)
            self.hits += 1
            BASIS_CACHE.labels(result="hit").inc()
            return basis

    def set(self, key: CacheKey, basis: Tuple[Polynomial, ...]):
        limit = self.max_entries
        if limit == 0:
            return
        with self._lock:
            self.cache[key] = basis
            self.cache.move_to_end(key)
            while len(self.cache) > limit:
                self.cache.popitem(last=False)

    def clear(self):
        with self._lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0

    def get_stats(self):
        lookups = self.hits + self.misses
        return {
            "total_keys": len(self.cache),
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": round(self.hits / lookups, 3) if lookups else 0.0,
        }


basis_cache = BasisCache()
