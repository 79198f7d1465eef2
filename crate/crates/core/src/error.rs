use thiserror::Error;

/// Every failure the library reports. Variants carry enough context to be
/// turned into the CLI's machine-readable error object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // exact fields
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields: {0} vs {1}")]
    MixedFields(String, String),
    #[error("{0} has no square root in the field")]
    NoSquareRoot(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("cannot parse field element {0:?}")]
    ParseElement(String),
    #[error("no quadratic extension available for {0}")]
    NoQuadraticExtension(String),

    // polynomials
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("polynomials live in different rings")]
    MixedRings,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),

    // curves
    #[error("curve is degenerate (discriminant vanishes)")]
    DegenerateCurve,
    #[error("the sextic has no root in the base field")]
    NoRationalRoot,
    #[error("characteristic {0} is too small for a series of order {1}")]
    CharacteristicTooSmall(u64, usize),
    #[error("point is not on the curve")]
    OffCurve,
    #[error("point is sent to the point at infinity")]
    PointAtInfinity,
    #[error("malformed curve: {0}")]
    MalformedCurve(String),

    // divisors and group law
    #[error("points are in involution; the class is neutral or special")]
    InvolutionPair,
    #[error("interpolation matrix is singular")]
    SingularInterpolation,
    #[error("divisor support contains a branch point")]
    BranchPointInSupport,
    #[error("divisor support has a repeated x-coordinate")]
    RepeatedX,
    #[error("operands are equal; use doubling")]
    SameDivisor,
    #[error("operands are inverse to each other")]
    InverseDivisors,
    #[error("operand supports overlap")]
    SupportOverlap,
    #[error("point lies over the support of the divisor")]
    QInSupport,
    #[error("branch condition violated: {0}")]
    ConditionViolated(String),
    #[error("divisor is 2-torsion")]
    TwoTorsion,
    #[error("expected a {expected} divisor")]
    WrongDivisorKind { expected: &'static str },
    #[error("duplication coefficients are undefined for this divisor")]
    GammaUndefined,
    #[error("unsupported torsion order {0}")]
    UnsupportedOrder(u64),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
