"""Finitary coalgebraic logic with the cover modality.

Functor expressions and their elements, relation lifting, slim
redistributions, model checking, the final sequence with a validity decider,
one-step semantics and a derivation checker.
"""
from .core import (
    base, enumerate_elements, enumeration_size, fmap, singleton_lift, typecheck,
)
from .elements import (
    BagOf, ConstSym, DistOf, Inl, Inner, Inr, MapOf, PairOf, SetOf, TElem,
    canonical_compare,
)
from .errors import (
    CarrierMismatch, DerivationError, EnumerationLimit, NablaError, NotEnumerable,
    NotFinitary, ParseError, TypeMismatch, UnknownState,
)
from .functors import (
    Compose, Constant, Exponent, FinBag, FinDist, FinPow, FunctorExpr, Identity,
    Product, Sum, format_functor, parse_functor, preserves_finite, with_props,
)
from .lifting import (
    Relation, compose_relations, in_lifting, lifted_members, lifted_members_filter,
    lifting_witness, load_relation,
)
from .literals import format_element, parse_element
from .onestep import (
    OneStepContext, eval0, eval1, lifted_atoms, neg_dual, one_step_equiv,
    one_step_leq, slim_redistributions,
)
from .proof import (
    CheckResult, Derivation, Inequality, check_derivation, format_proof, parse_proof,
)
from .semantics import (
    Coalgebra, FinalLevel, PointedCountermodel, Verdict, behavior_map, decide_valid,
    final_level, format_coalgebra, load_coalgebra, meaning_set, mng_n, model_check,
    n_final_coalgebra,
)
from .syntax import (
    BOT, TOP, Conj, Disj, Formula, Nabla, Neg, Var, box, depth, diamond,
    parse_formula, parse_inequality, print_formula, prop_formula, props_nabla,
    subformulas,
)

# longer names for the one-step evaluators
one_step_eval0 = eval0
one_step_eval1 = eval1
