"""Central desk-scale limits.

All enumerative operations in the package grow exponentially, so every
module consults a single Limits record instead of hard-coding caps.  The
defaults can be overridden by a JSON file named by the POINTFREE_CONFIG
environment variable, or per call via keyword arguments.
"""

import json
import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    poset_cap: int = 16          # max elements for downset / ideal enumeration
    generator_cap: int = 8       # max presentation generators
    positivity_scan_cap: int = 12  # max frame size for the exhaustive subset scan
    directed_scan_cap: int = 16  # max frame size for exhaustive directed-cover scan
    coproduct_cap: int = 16      # max |f| * |g| for tensor enumeration
    bnb_node_budget: int = 10**6  # branch-and-bound node budget

    def override(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs) if kwargs else self


def load_limits():
    """Limits from POINTFREE_CONFIG if set, otherwise the defaults."""
    path = os.environ.get("POINTFREE_CONFIG")
    if not path:
        return Limits()
    with open(path) as fh:
        data = json.load(fh)
    allowed = {k: data[k] for k in Limits.__dataclass_fields__ if k in data}
    return Limits(**allowed)


DEFAULT = Limits()
