//! Binary form algebra (stub while lower layers are built).

use crate::nf::FieldId;
use crate::polyq::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    pub degree: usize,
    pub coeffs: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSystem {
    pub components: Vec<FieldId>,
    pub closure: FieldId,
}
