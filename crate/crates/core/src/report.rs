//! Serialized report records and spectrum digests.
//!
//! The JSON shapes here are the tool's stable external surface; field order
//! is part of the contract and output for fixed inputs is byte-identical
//! across runs and worker counts.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::field::Field;
use crate::niho;
use crate::weil::{r_count_bruteforce, spectrum, Domain, Spectrum};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumEntryRecord {
    pub value: i64,
    pub mult: u64,
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
pub struct MomentsRecord {
    pub m1: i64,
    pub m2: i64,
    pub m3: i64,
}

/// The single-query spectrum report. `n` is the base degree and `ext` the
/// extension step, so the sums range over GF(p^(n*ext)).
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SpectrumRecord {
    pub p: u64,
    pub n: u32,
    pub ext: u32,
    pub s: u64,
    pub k: Option<u64>,
    pub d1: Option<u64>,
    pub d2: Option<u64>,
    pub domain: Domain,
    pub spectrum: Vec<SpectrumEntryRecord>,
    pub moments: MomentsRecord,
    pub r_count: u64,
}

/// Canonical digest of a spectrum: sha256 over a fixed text form.
pub fn spectrum_digest(spec: &Spectrum) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!(
        "p={};deg={};s={};domain={};",
        spec.p,
        spec.deg,
        spec.s,
        spec.domain.label()
    ));
    for &(v, m) in &spec.entries {
        hasher.update(format!("{v}:{m};"));
    }
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Compute the full spectrum report for GF(p^(n*ext)). Moments are always
/// taken over the whole field; the spectrum entries honor the domain choice.
/// Niho invariants (k, d1, d2) are attached when ext = 2.
pub fn spectrum_record(
    f: &Field,
    base_deg: u32,
    ext: u32,
    s: u64,
    domain: Domain,
    jobs: usize,
) -> Result<(SpectrumRecord, Spectrum)> {
    debug_assert_eq!(f.degree(), base_deg * ext);
    let units = spectrum(f, s, Domain::Units, jobs)?;
    let requested = if domain == Domain::Units {
        units.clone()
    } else {
        spectrum(f, s, domain, jobs)?
    };
    let (mut m1, mut m2, mut m3) = (0i128, 0i128, 0i128);
    for &(v, mult) in &units.entries {
        let (v, mult) = (v as i128, mult as i128);
        m1 += v * mult;
        m2 += v * v * mult;
        m3 += v * v * v * mult;
    }
    let (k, d1, d2) = if ext == 2 {
        match f.tower() {
            Ok(t) => match niho::classify(&t, s).normalized {
                Some(n) => (Some(n.k), Some(n.d1), Some(n.d2)),
                None => (None, None, None),
            },
            Err(_) => (None, None, None),
        }
    } else {
        (None, None, None)
    };
    let record = SpectrumRecord {
        p: f.characteristic(),
        n: base_deg,
        ext,
        s,
        k,
        d1,
        d2,
        domain,
        spectrum: requested
            .entries
            .iter()
            .map(|&(value, mult)| SpectrumEntryRecord { value, mult })
            .collect(),
        moments: MomentsRecord {
            m1: m1.try_into().expect("moment fits i64 at desk scale"),
            m2: m2.try_into().expect("moment fits i64 at desk scale"),
            m3: m3.try_into().expect("moment fits i64 at desk scale"),
        },
        r_count: r_count_bruteforce(f, s),
    };
    Ok((record, requested))
}

/// CSV mirror: one row per (value, mult).
pub fn spectrum_csv(record: &SpectrumRecord) -> String {
    let mut out = String::from("value,mult\n");
    for e in &record.spectrum {
        out.push_str(&format!("{},{}\n", e.value, e.mult));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_gf9_record() {
        let f = Field::build(3, 2).unwrap();
        let (rec, spec) = spectrum_record(&f, 1, 2, 5, Domain::Units, 1).unwrap();
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"p":3,"n":1,"ext":2,"s":5,"k":2,"d1":2,"d2":1,"domain":"Lx","spectrum":[{"value":-3,"mult":2},{"value":0,"mult":2},{"value":3,"mult":3},{"value":6,"mult":1}],"moments":{"m1":9,"m2":81,"m3":243},"r_count":3}"#
        );
        let csv = spectrum_csv(&rec);
        assert_eq!(csv, "value,mult\n-3,2\n0,2\n3,3\n6,1\n");
        // Digest is stable across recomputation.
        assert_eq!(spectrum_digest(&spec), spectrum_digest(&spec));
        // Round trip.
        let back: SpectrumRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn digest_distinguishes_inputs() {
        let f = Field::build(3, 2).unwrap();
        let s5 = spectrum(&f, 5, Domain::Units, 1).unwrap();
        let s7 = spectrum(&f, 7, Domain::Units, 1).unwrap();
        assert_ne!(spectrum_digest(&s5), spectrum_digest(&s7));
    }

    #[test]
    fn plain_field_record_has_no_tower_data() {
        let f = Field::build(7, 1).unwrap();
        let (rec, _) = spectrum_record(&f, 1, 1, 1, Domain::Units, 1).unwrap();
        assert_eq!(rec.k, None);
        assert_eq!(rec.d1, None);
        assert_eq!(rec.moments.m1, 7);
    }
}
