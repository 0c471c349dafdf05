use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised while building or checking categorical data.
///
/// Every variant names the offending identifiers so that a report can point
/// at the exact arrow, object or element that broke an invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate {kind} identifier `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("object `{object}` has no identity arrow")]
    MissingIdentity { object: String },
    #[error("ill-typed composite {g} . {f}: {reason}")]
    IllTypedComposite { g: String, f: String, reason: String },
    #[error("composite {g} . {f} is not declared")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} . {f} declared twice with different results")]
    ConflictingComposite { g: String, f: String },
    #[error("identity law fails for arrow `{arrow}`")]
    IdentityLaw { arrow: String },
    #[error("composition is not associative at ({h}, {g}, {f})")]
    NonAssociative { h: String, g: String, f: String },

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("invalid natural transformation: {0}")]
    InvalidNatural(String),
    #[error("invalid set-valued functor: {0}")]
    InvalidSetFunctor(String),
    #[error("invalid Cat-valued presheaf: {0}")]
    InvalidCatPresheaf(String),
    #[error("invalid 2-natural transformation: {0}")]
    InvalidTwoNat(String),
    #[error("invalid modification: {0}")]
    InvalidModification(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    #[error("enumeration exceeded the bound of {bound} candidates")]
    SizeBound { bound: u64 },

    #[error("not a discrete opfibration: object `{object}`, arrow `{arrow}` has {lifts} lifts")]
    NotOpfibration { object: String, arrow: String, lifts: usize },
    #[error("fibre over `{object}` is not discrete: arrow `{arrow}` is not an identity")]
    NonDiscreteFibre { object: String, arrow: String },
    #[error("component at `{object}` is not a discrete opfibration: {detail}")]
    NotOpfibrationAt { object: String, detail: String },

    #[error("invalid map into the classifier: {0}")]
    InvalidMapToOmega(String),
    #[error("classification map is not injective: {0}")]
    NotInjective(String),
    #[error("classification map is not surjective: {0}")]
    NotSurjective(String),
    #[error("no isomorphism found: {0}")]
    NoIsoFound(String),

    #[error("arrows do not share a codomain: `{0}` and `{1}`")]
    MixedCodomain(String, String),
    #[error("not a sieve: {0}")]
    NotASieve(String),
    #[error("{kind} axiom violated: {witness}")]
    AxiomViolation { kind: String, witness: String },
    #[error("representable at `{object}` is not a sheaf: {witness}")]
    NotSubcanonical { object: String, witness: String },

    #[error("invalid descent datum: {0}")]
    InvalidDescent(String),
    #[error("cocycle condition fails at f=`{f}`, g=`{g}`, h=`{h}`")]
    CocycleViolation { f: String, g: String, h: String },
    #[error("characteristic morphism does not factor through sheaves: {0}")]
    FactorizationFailed(String),
}

impl Error {
    pub fn is_size_bound(&self) -> bool {
        matches!(self, Error::SizeBound { .. })
    }
}
