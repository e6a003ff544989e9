//! Picard curve layer (stub while lower layers are built).

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardCurve {
    pub twist: u32,
    pub model: [num_bigint::BigInt; 4],
}

#[derive(Debug, Clone)]
pub struct TwistBlock {
    pub members: Vec<PicardCurve>,
}
