use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::exactnum::{Interval, Rational};
use crate::sysmodel::{simulate_affine, Coefficient, NormalizedSystem};

pub const DEFAULT_DEPTH_CAP: usize = 12;

/// Pair of state boxes sharing one output cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBox {
    pub box_x: Interval,
    pub box_x_prime: Interval,
    #[serde(with = "crate::exactnum::int_serde")]
    pub cell: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteforceWitness {
    pub x0: Rational,
    pub x0_prime: Rational,
    pub inputs: Vec<Rational>,
    pub inputs_prime: Vec<Rational>,
    #[serde(with = "crate::exactnum::int_serde::vec")]
    pub outputs: Vec<BigInt>,
    /// Every point pair drawn from `boxes[0]` follows the shared cell sequence.
    pub boxes: Vec<PairBox>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub depth: usize,
    #[serde(with = "crate::exactnum::int_serde")]
    pub window_lo: BigInt,
    #[serde(with = "crate::exactnum::int_serde")]
    pub window_hi: BigInt,
    pub nodes: u64,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BruteforceOutcome {
    Witness(BruteforceWitness),
    Exhausted(Exhaustion),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteforceOptions {
    pub depth_cap: usize,
    /// Extra cells on each side of the bounded reachable range.
    pub margin: u32,
}

impl Default for BruteforceOptions {
    fn default() -> Self {
        BruteforceOptions { depth_cap: DEFAULT_DEPTH_CAP, margin: 2 }
    }
}

struct Search<'a> {
    a: &'a Rational,
    inputs: &'a [Rational],
    depth: usize,
    lo: BigInt,
    hi: BigInt,
    nodes: u64,
    escaped: bool,
    frames: Vec<(Rational, Rational, PairBox)>,
}

/// Exhaustive search for two input words that differ at the first step and
/// produce identical outputs for `depth` steps.
///
/// Nodes are pairs of intervals confined to a common cell; each step branches
/// over input pairs and over the next shared cell. Cells are restricted to
/// `[-R - m, R + m]` with `R = ⌈max|u| / (|a| - 1)⌉`.
pub fn bruteforce_indistinguishable(
    sys: &NormalizedSystem,
    depth: usize,
    opts: &BruteforceOptions,
) -> Result<BruteforceOutcome, OracleError> {
    if depth > opts.depth_cap {
        return Err(OracleError::DepthCapExceeded { depth, cap: opts.depth_cap });
    }
    let a = sys.a().as_rational().ok_or(OracleError::NotRational)?;
    let abs_a = a.abs();
    if abs_a <= Rational::one() {
        return Err(OracleError::InvalidArgument("bounded window needs |a| > 1".into()));
    }
    let u_max = sys.inputs().iter().map(Rational::abs).max().expect("nonempty alphabet");
    let r = (&u_max / &(&abs_a - &Rational::one())).ceil();
    let margin = BigInt::from(opts.margin);
    let (lo, hi) = (-&r - &margin, &r + &margin);
    let mut search = Search {
        a,
        inputs: sys.inputs(),
        depth,
        lo: lo.clone(),
        hi: hi.clone(),
        nodes: 0,
        escaped: false,
        frames: Vec::with_capacity(depth),
    };
    let mut c = lo.clone();
    while c <= hi {
        let cell = Interval::cell(&c);
        let start = PairBox { box_x: cell.clone(), box_x_prime: cell, cell: c.clone() };
        if let Some(found) = search.descend(start) {
            let w = search.witness(found);
            verify(sys.a(), &w)?;
            return Ok(BruteforceOutcome::Witness(w));
        }
        c += 1;
    }
    if search.escaped {
        return Err(OracleError::CellWindowExceeded { lo, hi });
    }
    Ok(BruteforceOutcome::Exhausted(Exhaustion {
        depth,
        window_lo: lo,
        window_hi: hi,
        nodes: search.nodes,
        certified: true,
    }))
}

impl Search<'_> {
    /// Depth-first search in lexicographic order; returns the final pair box.
    fn descend(&mut self, node: PairBox) -> Option<PairBox> {
        self.nodes += 1;
        let step = self.frames.len();
        if step == self.depth {
            return Some(node);
        }
        for u in self.inputs {
            for u_prime in self.inputs {
                if step == 0 && u == u_prime {
                    continue;
                }
                let ix = node.box_x.affine_image(self.a, u);
                let ix_prime = node.box_x_prime.affine_image(self.a, u_prime);
                let Some(common) = ix.intersect(&ix_prime).map(|i| i.to_closed()) else {
                    continue;
                };
                let mut c = common.lo().floor();
                let last = common.hi().floor();
                while c <= last {
                    if c < self.lo || c > self.hi {
                        self.escaped = true;
                        c += 1;
                        continue;
                    }
                    let cell = Interval::cell(&c);
                    if let (Some(bx), Some(bx_prime)) = (ix.intersect(&cell), ix_prime.intersect(&cell)) {
                        self.frames.push((u.clone(), u_prime.clone(), node.clone()));
                        let next = PairBox { box_x: bx, box_x_prime: bx_prime, cell: c.clone() };
                        if let Some(found) = self.descend(next) {
                            return Some(found);
                        }
                        self.frames.pop();
                    }
                    c += 1;
                }
            }
        }
        None
    }

    /// Backward-refined boxes and midpoint initial states.
    fn witness(&self, last: PairBox) -> BruteforceWitness {
        let n = self.frames.len();
        let mut boxes = vec![last.clone()];
        let mut bx = last.box_x;
        let mut bx_prime = last.box_x_prime;
        for (u, u_prime, node) in self.frames.iter().rev() {
            bx = bx.affine_preimage(self.a, u).expect("a != 0");
            bx_prime = bx_prime.affine_preimage(self.a, u_prime).expect("a != 0");
            debug_assert!(bx.is_subset_of(&node.box_x) && bx_prime.is_subset_of(&node.box_x_prime));
            boxes.push(PairBox { box_x: bx.clone(), box_x_prime: bx_prime.clone(), cell: node.cell.clone() });
        }
        boxes.reverse();
        let mut outputs: Vec<BigInt> = self.frames.iter().map(|(_, _, node)| node.cell.clone()).collect();
        outputs.push(boxes[n].cell.clone());
        BruteforceWitness {
            x0: boxes[0].box_x.midpoint(),
            x0_prime: boxes[0].box_x_prime.midpoint(),
            inputs: self.frames.iter().map(|f| f.0.clone()).collect(),
            inputs_prime: self.frames.iter().map(|f| f.1.clone()).collect(),
            outputs,
            boxes,
        }
    }
}

fn verify(a: &Coefficient, w: &BruteforceWitness) -> Result<(), OracleError> {
    let n = w.inputs.len();
    let t = simulate_affine(a, &w.x0, &w.inputs, n)?;
    let t2 = simulate_affine(a, &w.x0_prime, &w.inputs_prime, n)?;
    if t.outputs != w.outputs || t2.outputs != w.outputs {
        return Err(OracleError::InvalidArgument("witness failed re-simulation".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn sys(a: &str, inputs: &[&str]) -> NormalizedSystem {
        NormalizedSystem::new(r(a).into(), inputs.iter().map(|s| r(s)).collect()).unwrap()
    }

    #[test]
    fn a_three_has_witness() {
        let out = bruteforce_indistinguishable(&sys("3", &["0", "1"]), 6, &BruteforceOptions::default()).unwrap();
        let BruteforceOutcome::Witness(w) = out else { panic!("expected witness") };
        assert_ne!(w.inputs[0], w.inputs_prime[0]);
        assert_eq!(w.outputs.len(), 7);
        assert_eq!(w.boxes.len(), 7);
    }

    #[test]
    fn uldi_system_exhausts() {
        let out = bruteforce_indistinguishable(&sys("3/2", &["0", "3"]), 6, &BruteforceOptions::default()).unwrap();
        assert!(matches!(out, BruteforceOutcome::Exhausted(e) if e.certified));
    }

    #[test]
    fn a_two_has_no_depth_one_witness() {
        let out = bruteforce_indistinguishable(&sys("2", &["0", "2"]), 1, &BruteforceOptions::default()).unwrap();
        assert!(matches!(out, BruteforceOutcome::Exhausted(_)));
    }

    #[test]
    fn limits() {
        let opts = BruteforceOptions::default();
        assert!(matches!(
            bruteforce_indistinguishable(&sys("3", &["0", "1"]), 13, &opts),
            Err(OracleError::DepthCapExceeded { .. })
        ));
        assert!(matches!(
            bruteforce_indistinguishable(&sys("1", &["0", "1"]), 2, &opts),
            Err(OracleError::InvalidArgument(_))
        ));
    }
}
