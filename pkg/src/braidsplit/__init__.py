"""Decide splitting of braid-like extensions of the symmetric group, with certificates."""

from .extension import (
    BraidWord,
    ExtensionData,
    NonSplit,
    SigmaModule,
    Split,
    SplitSystem,
    assemble_split_system,
    check_braid_relations,
    decide_split,
    evaluate_braid_word,
    operator_I,
    operator_J,
    verify_section,
)
from .instances import WreathInstanceSpec, an_sigma_module, extract_extension, wreath_extension
from .linalg import (
    Insolvable,
    IntegerMatrix,
    Residue,
    ResidueMatrix,
    ResidueVector,
    Solution,
    smith_normal_form,
    solve_mod,
    verify_outcome,
)

__version__ = "0.1.0"
