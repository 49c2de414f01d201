//! String serialisation for exact values, so JSON output never loses precision.

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::map_core::StateVector;
use crate::neutro::{NeutroMatrix, NeutroValue, StateSymbol};

pub(crate) mod rational_str {
    use serde::Serializer;

    use crate::neutro::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }
}

pub(crate) mod opt_rational_str {
    use serde::Serializer;

    use crate::neutro::Rational;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.collect_str(r),
            None => s.serialize_none(),
        }
    }
}

impl Serialize for NeutroValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for StateSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Row-major nested arrays of value strings.
impl Serialize for NeutroMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows()))?;
        for i in 0..self.rows() {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}
