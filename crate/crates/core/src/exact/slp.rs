use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlpOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlpGate {
    Zero,
    One,
    Op(SlpOp, usize, usize),
}

/// Division-free straight-line program over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlpCircuit {
    gates: Vec<SlpGate>,
    output: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Zero,
    Negative,
}

impl SlpCircuit {
    pub fn new(gates: Vec<SlpGate>, output: usize) -> Result<Self> {
        for (k, g) in gates.iter().enumerate() {
            if let SlpGate::Op(_, l, r) = *g {
                if l >= k || r >= k {
                    return Err(Error::invalid(format!("gate g{k} references a later gate")));
                }
            }
        }
        if output >= gates.len() {
            return Err(Error::invalid(format!("output g{output} does not exist")));
        }
        Ok(SlpCircuit { gates, output })
    }

    pub fn gates(&self) -> &[SlpGate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// `1`, then `count` squarings, starting from `1 + 1`.
    pub fn repeated_squaring_of_two(count: usize) -> Self {
        let mut gates = vec![SlpGate::One, SlpGate::Op(SlpOp::Add, 0, 0)];
        for _ in 0..count {
            let last = gates.len() - 1;
            gates.push(SlpGate::Op(SlpOp::Mul, last, last));
        }
        let output = gates.len() - 1;
        SlpCircuit { gates, output }
    }
}

/// Sign of the program's output, evaluated over arbitrary-precision
/// integers. Fails once any intermediate value needs more than `bit_cap`
/// bits; products are checked before they are formed.
pub fn posslp_decide(c: &SlpCircuit, bit_cap: u64) -> Result<Sign> {
    let mut vals: Vec<BigInt> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let v = match *g {
            SlpGate::Zero => BigInt::zero(),
            SlpGate::One => BigInt::one(),
            SlpGate::Op(op, l, r) => {
                let (a, b) = (&vals[l], &vals[r]);
                match op {
                    SlpOp::Add => a + b,
                    SlpOp::Sub => a - b,
                    SlpOp::Mul => {
                        let bound = a.bits() + b.bits();
                        if bound > bit_cap + 1 {
                            return Err(Error::BitCapExceeded { bits: bound, cap: bit_cap });
                        }
                        a * b
                    }
                }
            }
        };
        if v.bits() > bit_cap {
            return Err(Error::BitCapExceeded { bits: v.bits(), cap: bit_cap });
        }
        vals.push(v);
    }
    let out = &vals[c.output];
    Ok(if out.is_positive() {
        Sign::Positive
    } else if out.is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    })
}

impl fmt::Display for SlpCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.gates.iter().enumerate() {
            match g {
                SlpGate::Zero => writeln!(f, "g{k} = 0")?,
                SlpGate::One => writeln!(f, "g{k} = 1")?,
                SlpGate::Op(op, l, r) => {
                    let name = match op {
                        SlpOp::Add => "add",
                        SlpOp::Sub => "sub",
                        SlpOp::Mul => "mul",
                    };
                    writeln!(f, "g{k} = {name}(g{l}, g{r})")?
                }
            }
        }
        writeln!(f, "output g{}", self.output)
    }
}

fn gate_ref(s: &str, line: usize) -> Result<usize> {
    s.trim()
        .strip_prefix('g')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::invalid(format!("line {line}: bad gate reference {s:?}")))
}

impl FromStr for SlpCircuit {
    type Err = Error;

    /// One gate per line: `g<k> = 0`, `g<k> = 1` or `g<k> = add|sub|mul(g<i>, g<j>)`,
    /// optionally followed by `output g<k>` (defaults to the last gate).
    /// Blank lines and `#` comments are ignored.
    fn from_str(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let mut output = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let s = raw.split('#').next().unwrap_or("").trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix("output") {
                output = Some(gate_ref(rest, line)?);
                continue;
            }
            let (lhs, rhs) = s
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {line}: expected `g<k> = ...`")))?;
            if gate_ref(lhs, line)? != gates.len() {
                return Err(Error::invalid(format!("line {line}: gates must be numbered consecutively")));
            }
            let rhs = rhs.trim();
            let gate = match rhs {
                "0" => SlpGate::Zero,
                "1" => SlpGate::One,
                _ => {
                    let (name, args) = rhs
                        .strip_suffix(')')
                        .and_then(|r| r.split_once('('))
                        .ok_or_else(|| Error::invalid(format!("line {line}: expected op(a, b)")))?;
                    let op = match name.trim() {
                        "add" => SlpOp::Add,
                        "sub" => SlpOp::Sub,
                        "mul" => SlpOp::Mul,
                        other => return Err(Error::invalid(format!("line {line}: unknown op {other:?}"))),
                    };
                    let (a, b) = args
                        .split_once(',')
                        .ok_or_else(|| Error::invalid(format!("line {line}: expected two operands")))?;
                    SlpGate::Op(op, gate_ref(a, line)?, gate_ref(b, line)?)
                }
            };
            gates.push(gate);
        }
        if gates.is_empty() {
            return Err(Error::invalid("empty straight-line program"));
        }
        let output = output.unwrap_or(gates.len() - 1);
        SlpCircuit::new(gates, output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_plus_one_positive() {
        let c: SlpCircuit = "g0 = 1\ng1 = add(g0, g0)".parse().unwrap();
        assert_eq!(posslp_decide(&c, 64).unwrap(), Sign::Positive);
    }

    #[test]
    fn one_minus_one_zero() {
        let c: SlpCircuit = "g0 = 1\ng1 = sub(g0, g0)".parse().unwrap();
        assert_eq!(posslp_decide(&c, 64).unwrap(), Sign::Zero);
    }

    #[test]
    fn negative_output() {
        let c: SlpCircuit = "g0 = 0\ng1 = 1\ng2 = sub(g0, g1)\ng3 = mul(g2, g2)\ng4 = sub(g2, g3)".parse().unwrap();
        assert_eq!(posslp_decide(&c, 64).unwrap(), Sign::Negative);
    }

    #[test]
    fn repeated_squaring_hits_cap() {
        let c = SlpCircuit::repeated_squaring_of_two(64);
        assert!(matches!(posslp_decide(&c, 1 << 20), Err(Error::BitCapExceeded { .. })));
        // 2^(2^10) has 1025 bits
        let small = SlpCircuit::repeated_squaring_of_two(10);
        assert_eq!(posslp_decide(&small, 1025).unwrap(), Sign::Positive);
        assert!(posslp_decide(&small, 1024).is_err());
    }

    #[test]
    fn forward_reference_rejected() {
        assert!("g0 = add(g0, g0)".parse::<SlpCircuit>().is_err());
    }

    #[test]
    fn text_round_trip() {
        let c = SlpCircuit::repeated_squaring_of_two(3);
        assert_eq!(c.to_string().parse::<SlpCircuit>().unwrap(), c);
    }
}
