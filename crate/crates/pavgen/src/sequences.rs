//! Reference counting sequences.
//!
//! Every stored term is recomputed from a stated derivation rule (a
//! recurrence, a closed form, or the brute-force oracle) — never typed in
//! from memory. Term t(n) is the expected size of S_n(P) for the entry
//! the reference is attached to, starting at n = 0.

use num_bigint::BigUint;
use serde::Serialize;

use crate::pattern_set::PatternSet;
use crate::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// t(0)=t(1)=1, t(n)=2 t(n-1): 2^(n-1) for n >= 1.
    Pow2,
    /// t(0)=t(1)=1, t(2)=2, t(n)=2 t(n-1)+t(n-2).
    Pell,
    /// t(0)=t(1)=1, t(n)=3 t(n-1)-t(n-2).
    FibBisect,
    /// t(0)=1, t(n+1)=sum t(i) t(n-i).
    Catalan,
    /// r(0)=1, r(1)=2, r(n)=3 r(n-1)+sum_{j=1..n-2} r(j) r(n-1-j); t(n)=r(n-1), t(0)=1.
    Schroeder,
    /// t(0)=t(1)=1, t(n)=t(n-1)+t(n-2).
    Fibonacci,
    /// t(0)=1, t(n)=sum of the previous min(n, order) terms.
    GenFib,
    /// Brute-force oracle level sizes for {312, 2431, 4321}.
    PadovanBt,
    /// t(0)=1, t(n)=binomial(2n-2, n-1).
    CentralBinomial,
}

/// A named counting sequence with a reproducible derivation rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceRef {
    pub oeis_id: Option<&'static str>,
    pub name: String,
    pub kind: SequenceKind,
    /// Order parameter for `GenFib`.
    pub param: Option<u32>,
    /// How the stored terms are produced.
    pub provenance: String,
}

impl SequenceRef {
    pub fn new(kind: SequenceKind, param: Option<u32>) -> Self {
        use SequenceKind::*;
        let (oeis_id, name, provenance) = match kind {
            Pow2 => (
                Some("A000079"),
                "2^(n-1)".to_string(),
                "t(0)=t(1)=1, t(n)=2*t(n-1)".to_string(),
            ),
            Pell => (
                Some("A000129"),
                "Pell numbers".to_string(),
                "t(0)=t(1)=1, t(2)=2, t(n)=2*t(n-1)+t(n-2)".to_string(),
            ),
            FibBisect => (
                Some("A001519"),
                "bisection of the Fibonacci sequence".to_string(),
                "t(0)=t(1)=1, t(n)=3*t(n-1)-t(n-2)".to_string(),
            ),
            Catalan => (
                Some("A000108"),
                "Catalan numbers".to_string(),
                "t(0)=1, t(n+1)=sum_{i=0..n} t(i)*t(n-i)".to_string(),
            ),
            Schroeder => (
                Some("A006318"),
                "large Schroeder numbers".to_string(),
                "r(0)=1, r(1)=2, r(n)=3*r(n-1)+sum_{j=1..n-2} r(j)*r(n-1-j); t(0)=1, t(n)=r(n-1)"
                    .to_string(),
            ),
            Fibonacci => (
                Some("A000045"),
                "Fibonacci numbers".to_string(),
                "t(0)=t(1)=1, t(n)=t(n-1)+t(n-2)".to_string(),
            ),
            GenFib => {
                let order = param.expect("GenFib needs its order");
                (
                    if order == 2 { Some("A000045") } else { None },
                    format!("generalized Fibonacci numbers of order {order}"),
                    format!("t(0)=1, t(n)=sum of the previous min(n,{order}) terms"),
                )
            }
            PadovanBt => (
                Some("A034943"),
                "binomial transform of the Padovan sequence".to_string(),
                "sizes of the brute-force oracle levels for {312, 2431, 4321}".to_string(),
            ),
            CentralBinomial => (
                Some("A000984"),
                "central binomial coefficients".to_string(),
                "t(0)=1, t(n)=binomial(2n-2, n-1)".to_string(),
            ),
        };
        SequenceRef { oeis_id, name, kind, param, provenance }
    }

    /// First `count` terms, t(0) .. t(count-1).
    pub fn terms(&self, count: usize) -> Vec<BigUint> {
        use SequenceKind::*;
        let one = BigUint::from(1u32);
        let mut t: Vec<BigUint> = Vec::with_capacity(count);
        match self.kind {
            Pow2 => {
                for n in 0..count {
                    t.push(match n {
                        0 | 1 => one.clone(),
                        _ => 2u32 * &t[n - 1],
                    });
                }
            }
            Pell => {
                for n in 0..count {
                    t.push(match n {
                        0 | 1 => one.clone(),
                        2 => BigUint::from(2u32),
                        _ => 2u32 * &t[n - 1] + &t[n - 2],
                    });
                }
            }
            FibBisect => {
                for n in 0..count {
                    t.push(match n {
                        0 | 1 => one.clone(),
                        _ => 3u32 * &t[n - 1] - &t[n - 2],
                    });
                }
            }
            Catalan => {
                for n in 0..count {
                    if n == 0 {
                        t.push(one.clone());
                    } else {
                        let conv: BigUint =
                            (0..n).map(|i| &t[i] * &t[n - 1 - i]).sum();
                        t.push(conv);
                    }
                }
            }
            Schroeder => {
                let mut r: Vec<BigUint> = Vec::with_capacity(count);
                for n in 0..count.max(1) {
                    r.push(match n {
                        0 => one.clone(),
                        1 => BigUint::from(2u32),
                        _ => {
                            let conv: BigUint =
                                (1..=n - 2).map(|j| &r[j] * &r[n - 1 - j]).sum();
                            3u32 * &r[n - 1] + conv
                        }
                    });
                }
                for n in 0..count {
                    t.push(if n == 0 { one.clone() } else { r[n - 1].clone() });
                }
            }
            Fibonacci => {
                for n in 0..count {
                    t.push(match n {
                        0 | 1 => one.clone(),
                        _ => &t[n - 1] + &t[n - 2],
                    });
                }
            }
            GenFib => {
                let order = self.param.expect("GenFib needs its order") as usize;
                for n in 0..count {
                    if n == 0 {
                        t.push(one.clone());
                    } else {
                        let from = n.saturating_sub(order);
                        t.push(t[from..n].iter().sum());
                    }
                }
            }
            PadovanBt => {
                let patterns = PatternSet::from_strs(&["312", "2431", "4321"]).unwrap();
                let levels = verify::oracle_levels(count.saturating_sub(1), &patterns);
                for level in &levels {
                    t.push(BigUint::from(level.len()));
                }
            }
            CentralBinomial => {
                for n in 0..count {
                    t.push(if n == 0 { one.clone() } else { binomial(2 * n - 2, n - 1) });
                }
            }
        }
        t.truncate(count);
        t
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for j in 0..k {
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(kind: SequenceKind, param: Option<u32>, count: usize) -> Vec<u64> {
        SequenceRef::new(kind, param)
            .terms(count)
            .iter()
            .map(|b| u64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn recurrences_produce_expected_small_terms() {
        assert_eq!(nums(SequenceKind::Pow2, None, 7), [1, 1, 2, 4, 8, 16, 32]);
        assert_eq!(nums(SequenceKind::Pell, None, 8), [1, 1, 2, 5, 12, 29, 70, 169]);
        assert_eq!(nums(SequenceKind::FibBisect, None, 7), [1, 1, 2, 5, 13, 34, 89]);
        assert_eq!(
            nums(SequenceKind::Catalan, None, 9),
            [1, 1, 2, 5, 14, 42, 132, 429, 1430]
        );
        assert_eq!(nums(SequenceKind::Schroeder, None, 7), [1, 1, 2, 6, 22, 90, 394]);
        assert_eq!(nums(SequenceKind::Fibonacci, None, 8), [1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(nums(SequenceKind::GenFib, Some(2), 8), [1, 1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(nums(SequenceKind::GenFib, Some(3), 8), [1, 1, 2, 4, 7, 13, 24, 44]);
        assert_eq!(
            nums(SequenceKind::CentralBinomial, None, 7),
            [1, 1, 2, 6, 20, 70, 252]
        );
    }

    #[test]
    fn padovan_terms_come_from_the_oracle() {
        // Level sizes of the generating tree for {312, 2431, 4321}.
        assert_eq!(nums(SequenceKind::PadovanBt, None, 5), [1, 1, 2, 5, 12]);
    }

    #[test]
    fn genfib_high_order_matches_factorial_prefix() {
        // With order >= n the sum runs over all previous terms: 2^(n-1).
        assert_eq!(nums(SequenceKind::GenFib, Some(10), 8), [1, 1, 2, 4, 8, 16, 32, 64]);
    }
}
