"""Group presentations, Cayley graph providers, and graph families."""

from .base import CayleyGraphProvider, Group
from .families import (
    BeadChainProvider,
    GridProvider,
    PathProvider,
    RegularTreeProvider,
    StarProvider,
    family_provider,
)
from .kinds import (
    BaumslagSolitar12,
    FreeAbelianGroup,
    FreeGroup,
    HeisenbergGroup,
    LamplighterGroup,
    group_by_name,
)
from .grigorchuk import GrigorchukGroup
from .semigroup import SemigroupTree, free_pair_search, semigroup_tree

__all__ = [
    "Group",
    "CayleyGraphProvider",
    "FreeAbelianGroup",
    "FreeGroup",
    "HeisenbergGroup",
    "LamplighterGroup",
    "BaumslagSolitar12",
    "GrigorchukGroup",
    "group_by_name",
    "cayley_provider",
    "family_provider",
    "RegularTreeProvider",
    "GridProvider",
    "BeadChainProvider",
    "PathProvider",
    "StarProvider",
    "SemigroupTree",
    "semigroup_tree",
    "free_pair_search",
]


def cayley_provider(group: Group, generators: list[str] | None = None) -> CayleyGraphProvider:
    """Cayley graph of the group over its default or a custom generating set.

    `generators` are encoded elements; the set must be inversion closed
    and must not contain the identity.
    """
    gens = None
    if generators is not None:
        gens = [group.decode(s) for s in generators]
    return CayleyGraphProvider(group, gens)
