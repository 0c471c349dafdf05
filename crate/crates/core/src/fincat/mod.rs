//! Finite categories, functors, natural transformations, set-valued functors
//! and slices.

mod category;
mod enumerate;
mod functor;
mod setfn;
mod slice;

pub(crate) use category::RawCat;
pub use category::{build_category, Arr, CategoryTables, FinCat, Obj};
pub use enumerate::{
    category_iso, enumerate_functors, enumerate_nats, enumerate_set_nats, functor_search, natural_iso, set_iso,
};
pub use functor::{FinFunctor, NatTransform};
pub use setfn::{FinSetFunctor, SetDiagram, SetNat, SetPresheaf, SetTables};
pub use slice::{postcompose, slice, Slice, SliceFamily};
