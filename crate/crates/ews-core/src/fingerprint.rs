//! Content fingerprint for cohorts so reports can state exactly which data
//! they were computed from.

use crate::record::StudentRecord;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Incremental FNV-1a hasher over byte chunks.
#[derive(Clone, Copy, Debug)]
pub struct Fnv64(u64);

impl Fnv64 {
    pub fn new() -> Self {
        Self(FNV_OFFSET)
    }

    pub fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= *b as u64;
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
    }

    pub fn write_f64(&mut self, x: f64) {
        self.write(&x.to_bits().to_le_bytes());
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

impl Default for Fnv64 {
    fn default() -> Self {
        Self::new()
    }
}

/// Hash every field of every record, in row order.
pub fn cohort_fingerprint(cohort: &[StudentRecord]) -> u64 {
    let mut h = Fnv64::new();
    h.write(&(cohort.len() as u64).to_le_bytes());
    for r in cohort {
        h.write(r.student_code.as_bytes());
        h.write(&[0xff]);
        for field in r.background_labels() {
            match field {
                Some(label) => h.write(label.as_bytes()),
                None => h.write(b"?"),
            }
            h.write(&[0xfe]);
        }
        for (name, score) in &r.ca_results {
            h.write(name.as_bytes());
            h.write_f64(*score);
        }
        for count in r.activity.raw() {
            h.write(&count.to_le_bytes());
        }
        h.write_f64(r.final_grade);
    }
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_known_vector() {
        // FNV-1a of "a" is a published constant
        let mut h = Fnv64::new();
        h.write(b"a");
        assert_eq!(h.finish(), 0xaf63_dc4c_8601_ec8c);
    }
}
