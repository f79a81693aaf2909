use num_rational::Rational64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in Q(zeta_24)")]
    DivisionByZero,

    #[error("e({0}) is not a 24th root of unity")]
    NotA24thRoot(Rational64),

    #[error("coefficient at q^({requested}) requested but series is only known below q^({prec})")]
    InsufficientPrecision { requested: Rational64, prec: Rational64 },

    #[error("series with vanishing leading term is not invertible")]
    NotInvertible,

    #[error("exact series {0} has no finite inverse; supply a working precision")]
    InfiniteExpansion(String),

    #[error("exponent {0} must be positive")]
    NonPositiveExponent(Rational64),

    #[error("half-integral total weight {0}/2 for eta quotient")]
    HalfIntegralWeight(i64),

    #[error("slash weight {requested} does not match eta quotient weight {actual}")]
    WeightMismatch { requested: i64, actual: i64 },

    #[error("matrix {0:?} is not in SL2(Z)")]
    NotInSl2([i64; 4]),

    #[error("sqrt({0}) is not representable in Q(zeta_24)")]
    SqrtNotRepresentable(i64),

    #[error("cannot parse eta quotient '{0}'")]
    EtaParse(String),

    #[error("cannot parse rational '{0}'")]
    RationalParse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the Gamma0(4) lift against phi_0 requires odd k, got k = {0}")]
    EvenWeightLift(u32),

    #[error("basis triangularity violated: {0}")]
    Triangularity(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("point is not in D_K: y1 + y3^2 + y4^2 = {0} is not negative")]
    NotInDomain(String),

    #[error("value {0} is not a rational integer")]
    NotAnInteger(String),

    #[error("precision regions of FJ series are incompatible: {0}")]
    IncompatiblePrecision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
