//! Plain-text dump of a block operator for debugging.
//!
//! ```text
//! block-operator v1
//! n 2
//! c1 0.5
//! P
//! <n rows of n decimal entries>
//! T
//! <n rows>
//! S
//! <n rows>
//! ```
//!
//! `Q` is not written; it is rebuilt as `Tᵀ`. Entries use Rust's
//! shortest round-trip formatting, which is locale independent.

use std::fmt::Write as _;

use num_traits::Num;

use super::{BlockOperator, C1Policy};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::scalar::Scalar;

const MAGIC: &str = "block-operator v1";

fn write_block<T: Scalar>(out: &mut String, name: &str, m: &BandMatrix<T>) {
    out.push_str(name);
    out.push('\n');
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{}", m.get(i, j)).unwrap();
        }
        out.push('\n');
    }
}

impl<T: Scalar> BlockOperator<T> {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{MAGIC}").unwrap();
        writeln!(out, "n {}", self.n()).unwrap();
        writeln!(out, "c1 {}", self.c1).unwrap();
        write_block(&mut out, "P", &self.p);
        write_block(&mut out, "T", &self.t);
        write_block(&mut out, "S", &self.s);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Format {
                line: 0,
                message: format!("unexpected end of input, expected {what}"),
            })
        };
        let (line, magic) = next("header")?;
        if magic != MAGIC {
            return Err(Error::Format {
                line,
                message: format!("expected header `{MAGIC}`"),
            });
        }
        let (line, n) = keyed(next("n")?, "n")?;
        let n: usize = n.parse().map_err(|_| bad_value(line, "n"))?;
        if n == 0 {
            return Err(Error::Format {
                line,
                message: "dimension must be positive".into(),
            });
        }
        let (line, c1) = keyed(next("c1")?, "c1")?;
        let c1: T = parse_scalar(c1, line)?;
        let mut blocks = Vec::with_capacity(3);
        for name in ["P", "T", "S"] {
            let (line, tag) = next(name)?;
            if tag != name {
                return Err(Error::Format {
                    line,
                    message: format!("expected block tag `{name}`"),
                });
            }
            let mut entries = Vec::with_capacity(n * n);
            for _ in 0..n {
                let (line, row) = next("matrix row")?;
                let before = entries.len();
                for tok in row.split_whitespace() {
                    entries.push(parse_scalar::<T>(tok, line)?);
                }
                if entries.len() - before != n {
                    return Err(Error::Format {
                        line,
                        message: format!("expected {n} entries, found {}", entries.len() - before),
                    });
                }
            }
            blocks.push(BandMatrix::from_row_major(n, &entries));
        }
        let s = blocks.pop().unwrap();
        let t = blocks.pop().unwrap();
        let p = blocks.pop().unwrap();
        BlockOperator::assemble(p, t, s, C1Policy::Asserted(c1))
    }
}

fn parse_scalar<T: Scalar>(tok: &str, line: usize) -> Result<T> {
    <T as Num>::from_str_radix(tok, 10).map_err(|_| Error::Format {
        line,
        message: format!("invalid number `{tok}`"),
    })
}

fn keyed<'a>((line, text): (usize, &'a str), key: &str) -> Result<(usize, &'a str)> {
    text.strip_prefix(key)
        .filter(|rest| rest.starts_with(' '))
        .map(|rest| (line, rest.trim()))
        .ok_or_else(|| Error::Format {
            line,
            message: format!("expected `{key} <value>`"),
        })
}

fn bad_value(line: usize, key: &str) -> Error {
    Error::Format {
        line,
        message: format!("invalid value for `{key}`"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scalar_layout() {
        let b = BlockOperator::assemble(
            BandMatrix::from_diagonal(&[2.0]),
            BandMatrix::from_diagonal(&[1.0]),
            BandMatrix::from_diagonal(&[1.0]),
            C1Policy::Compute,
        )
        .unwrap();
        assert_eq!(b.to_text(), "block-operator v1\nn 1\nc1 1\nP\n2\nT\n1\nS\n1\n");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            BlockOperator::<f64>::from_text("nope"),
            Err(Error::Format { line: 1, .. })
        ));
        let short = "block-operator v1\nn 2\nc1 1\nP\n1 0\n0 1\nT\n1 0\n";
        assert!(matches!(
            BlockOperator::<f64>::from_text(short),
            Err(Error::Format { .. })
        ));
        let bad_row = "block-operator v1\nn 1\nc1 1\nP\n1 2\nT\n1\nS\n1\n";
        assert!(matches!(
            BlockOperator::<f64>::from_text(bad_row),
            Err(Error::Format { line: 5, .. })
        ));
    }

    proptest! {
        #[test]
        fn text_round_trip(
            n in 1usize..5,
            seed in proptest::collection::vec(-10.0f64..10.0, 48),
        ) {
            let at = |k: usize| seed[k % seed.len()];
            let mut p = vec![0.0; n * n];
            let mut t = vec![0.0; n * n];
            let mut s = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    t[i * n + j] = at(3 * i + 5 * j + 1);
                    if j >= i {
                        p[i * n + j] = at(i + 7 * j);
                        p[j * n + i] = p[i * n + j];
                        let off = if i == j { 40.0 } else { at(2 * i + j + 11) * 0.1 };
                        s[i * n + j] = off;
                        s[j * n + i] = off;
                    }
                }
            }
            let b = BlockOperator::assemble(
                BandMatrix::from_row_major(n, &p),
                BandMatrix::from_row_major(n, &t),
                BandMatrix::from_row_major(n, &s),
                C1Policy::Compute,
            ).unwrap();
            let back = BlockOperator::<f64>::from_text(&b.to_text()).unwrap();
            prop_assert_eq!(back, b);
        }
    }
}
