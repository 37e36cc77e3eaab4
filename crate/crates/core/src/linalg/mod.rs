//! Exact integer linear algebra over ℤ.

mod group;
mod matrix;
mod smith;

pub use group::{
    coker_of_hom, cokernel, element_equal, image, image_equals_kernel, kernel,
    tabulate_abelian_group, Cokernel, DirectSum, FgAbGroup, GroupElement, GroupHom, Subquotient,
    TabulatedGroup,
};
pub(crate) use group::{coker_subquotient, greedy_generators, kernel_subquotient};
pub use matrix::{Int, IntMatrix};
pub use smith::{integer_kernel, smith_normal_form, Lattice, SmithForm};
