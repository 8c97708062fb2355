"""Constructive steps of the completeness argument."""

from .clean import FORWARD, MIRRORED, NotClean, comb, down, is_clean, up
from .normal import (
    DEFAULT_MAX_ITEMS, NFBudgetError, NFItem, NormalForm, nf, nf_expr, odot,
    otimes, positive, reduce,
)
from .pipeline import (
    OneFreeObligation, TestObligation, all_discharged, reduce_to_onefree,
)
from .subunits import TestSet, interone, interone_expr, test_expr, test_leq
from .top import FRESH, phi_top, phi_top_pair, top_image
from .words import (
    build_sigma_dblprime, build_sigma_prime, closure, erase, eta, is_closed,
    is_valid_word, psi, rule_closure, word_join, word_leq,
)
