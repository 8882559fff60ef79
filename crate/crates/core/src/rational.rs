//! Exact rationals and their JSON encoding.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// An exact rational number.
pub type Exact = Ratio<i128>;

/// JSON form of an [`Exact`]: `{"num": "5", "den": "18"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactJson {
    pub num: String,
    pub den: String,
}

impl From<&Exact> for ExactJson {
    fn from(r: &Exact) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

pub fn exact(num: i128, den: i128) -> Exact {
    Ratio::new(num, den)
}

pub fn to_f64(r: &Exact) -> f64 {
    r.to_f64().expect("finite rational")
}

pub(crate) mod serde_exact {
    use super::{Exact, ExactJson};
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Exact, s: S) -> Result<S::Ok, S::Error> {
        ExactJson::from(r).serialize(s)
    }
}
