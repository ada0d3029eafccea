//! Finite pointed algebras and their commutator calculus: Huq, Higgins
//! (binary and ternary), Smith and weighted commutators, w-normal closures,
//! and instance checkers for the conditions relating them.

pub mod algebra;
pub mod closure;
pub mod commutators;
pub mod conditions;
pub mod congruence;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod files;
pub mod freeprod;
pub mod groups;
pub mod hom;
pub mod library;
pub mod sub;
pub mod term;
pub mod varieties;

pub use algebra::{FinAlgebra, GroupOps, OpSpec, Signature};
pub use closure::{Certificate, TupleClosure};
pub use commutators::{
    commute_over, cooperator, higgins, higgins_binary, higgins_ternary, is_w_normal, normalise, smith,
    w_normal_closure, CommutatorReport, Completeness, Strategy, TernaryStrategy, WeightedCospan, WeightedStrategy,
};
pub use conditions::{
    admissible, check_c_instance, check_reflection_instance, check_sh_instance, check_ssh_instance, check_w_instance,
    groups_phi, AdmissibleDiagram, ConditionVerdict, Fibration,
};
pub use congruence::{extend_congruence, generate_congruence, pullback_congruence, quotient, Congruence};
pub use construct::{product, pullback, pullback_point, pullback_split, PointObject, Sections, SpanWitness};
pub use error::{Error, Result};
pub use hom::{check_hom, image_sub, kernel_pair, kernel_sub, Hom};
pub use sub::{generate_subuniverse, Subuniverse};
pub use term::{eval_term, Term};
pub use varieties::{malcev_check, verify_identities, Family, VarietyProfile};
