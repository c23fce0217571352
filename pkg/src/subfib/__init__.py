"""subfib: finite Grothendieck fibrations, generalized categories with
families, and coercive subtyping, with every law checked by enumeration."""

from .errors import (MalformedEntity, MismatchedBase, MismatchedJudgements,
                     MissingBase, NoLift, NonSplitCleavage, NonStrict,
                     NoPullback, NotAFibration, NoTerminal, NotFaithful,
                     ParseError, StageTwoUnavailable, SubfibError, TooLarge,
                     UnknownMorphism, UnknownObject, UnknownType,
                     ValidationError)
from .fincat import (FinCategory, FinFunctor, NatTransformation,
                     PullbackResult, derived_category, discrete_category,
                     poset_category, pullback, terminal_category,
                     terminal_object, validate, walking_arrow)
from .fibration import (Classification, Fibration, IndexedCategory,
                        base_pair_fibration, fibred_product, grothendieck,
                        identity_fibration, indexed_of, is_fibration_morphism,
                        vertical_opposite)
from .gcwf import (CoercedTermJ, Gcwf, GcwfMorphism, SubtypeJ, TermJ, TypeJ,
                   check_gcwf, check_gcwf_morphism, check_judgement,
                   check_sigma_faithful, context_extension,
                   enumerate_judgements, judgement_errors, render_judgement,
                   rule_sbsm, rule_sbst, rule_trans, rule_wkn)
from .models import (HeytingFiberSpec, doctrine_gcwf, finset_skeleton,
                     heyting_sample, kernel_pair_gcwf, subobject_gcwf,
                     validate_heyting_spec)
from .funty import (FunStructure, check_fun_structure, derive_fun_subtyping,
                    derive_lam_typing, fun_structure_doctrine,
                    fun_structure_subobject, fun_type, stage_passed,
                    weakening_functor)
from .monad import (CommaFibration, GcwfMonadData, T_fib, T_gcwf,
                    check_counit_universal, check_monad_laws_fib,
                    check_monad_laws_gcwf, comma_unit, iterate)
from .report import Report

__version__ = "0.1.0"
