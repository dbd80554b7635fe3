"""Union-closed families generated by k-sets: closures, orders, shadows,
extremal constructions and an exact minimizer for f(n, k)."""

__version__ = "0.1.0"

from .closure import close, closure_contains, closure_size, union_closure
from .orders import OrderKind, compare, initial_segment, rank
from .search import SearchConfig, SearchOutcome, f_min
from .setcore import Family, canonicalize, degree, is_isomorphic, mask_of

__all__ = [
    "Family", "OrderKind", "SearchConfig", "SearchOutcome",
    "canonicalize", "close", "closure_contains", "closure_size", "compare", "degree",
    "f_min", "initial_segment", "is_isomorphic", "mask_of", "rank", "union_closure",
]
