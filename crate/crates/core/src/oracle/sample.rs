use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TreeCode;
use crate::child_set::ChildSet;
use crate::error::{Error, Result};

/// Cumulative weights of one decision; `options[i]` is the value chosen.
#[derive(Debug, Clone)]
struct Choice {
    options: Vec<usize>,
    cumulative: Vec<BigUint>,
}

impl Choice {
    fn new(weighted: impl IntoIterator<Item = (usize, BigUint)>) -> Self {
        let mut options = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = BigUint::zero();
        for (opt, w) in weighted {
            if w.is_zero() {
                continue;
            }
            acc += w;
            options.push(opt);
            cumulative.push(acc.clone());
        }
        Choice { options, cumulative }
    }

    fn total(&self) -> BigUint {
        self.cumulative.last().cloned().unwrap_or_default()
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.options.len() == 1 {
            return self.options[0];
        }
        let r = rng.gen_biguint_below(&self.total());
        let i = self.cumulative.partition_point(|c| c <= &r);
        self.options[i]
    }

    fn probability(&self, opt: usize) -> Option<BigRational> {
        let i = self.options.iter().position(|&o| o == opt)?;
        let lo = if i == 0 {
            BigUint::zero()
        } else {
            self.cumulative[i - 1].clone()
        };
        let w = &self.cumulative[i] - lo;
        Some(BigRational::new(w.into(), self.total().into()))
    }
}

/// Uniform sampler over trees on `n` vertices by the recursive method.
///
/// With `f_m` the number of trees on `m` vertices and `F_j(m)` the number of
/// ordered forests of `j` trees on `m` vertices, a tree of size `m` picks its
/// root child count `i` with weight `F_i(m - 1)`, and a forest of `j` trees
/// on `m` vertices gives its first tree `a` vertices with weight
/// `f_a F_{j-1}(m - a)`.
#[derive(Debug, Clone)]
pub struct UniformSampler {
    n: u64,
    tree_counts: Vec<BigUint>,
    root: Vec<Choice>,
    /// `split[j][m]` for forests of `j >= 2` trees.
    split: Vec<Vec<Choice>>,
}

impl UniformSampler {
    pub fn new(set: &ChildSet, n: u64) -> Result<Self> {
        let n_us = n as usize;
        let kmax = set.max() as usize;
        // forests[j][m]; forests[0] = [1, 0, 0, ...]
        let mut forests = vec![vec![BigUint::zero(); n_us + 1]; kmax + 1];
        forests[0][0] = BigUint::one();
        let mut f = vec![BigUint::zero(); n_us + 1];
        for m in 1..=n_us {
            // forests of j >= 1 trees on m - 1 vertices only need f_1..f_{m-1}
            let size = m - 1;
            for j in 1..=kmax {
                let mut acc = BigUint::zero();
                for a in 1..=size {
                    if !f[a].is_zero() && !forests[j - 1][size - a].is_zero() {
                        acc += &f[a] * &forests[j - 1][size - a];
                    }
                }
                forests[j][size] = acc;
            }
            f[m] = set.elements().iter().map(|&i| &forests[i as usize][size]).sum();
        }
        if n == 0 || f[n_us].is_zero() {
            return Err(Error::NoTrees {
                set: set.to_string(),
                n,
            });
        }
        let root = (0..=n_us)
            .map(|m| {
                if m == 0 {
                    return Choice::new([]);
                }
                Choice::new(
                    set.elements()
                        .iter()
                        .map(|&i| (i as usize, forests[i as usize][m - 1].clone())),
                )
            })
            .collect();
        let split = (0..=kmax)
            .map(|j| {
                if j < 2 {
                    return Vec::new();
                }
                (0..=n_us)
                    .map(|m| {
                        Choice::new((1..=m).map(|a| (a, &f[a] * &forests[j - 1][m - a])))
                    })
                    .collect()
            })
            .collect();
        Ok(UniformSampler {
            n,
            tree_counts: f,
            root,
            split,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of trees on `n` vertices.
    pub fn tree_count(&self) -> &BigUint {
        &self.tree_counts[self.n as usize]
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> TreeCode {
        let mut code = Vec::with_capacity(self.n as usize);
        self.walk(|_, choice| choice.draw(rng), |c| code.push(c as u32));
        TreeCode(code)
    }

    /// Probability with which [`sample`](Self::sample) emits `code`, obtained
    /// by replaying its decisions. `None` if the sampler never emits it.
    pub fn probability_of(&self, code: &TreeCode) -> Option<BigRational> {
        if code.len() as u64 != self.n || !code.is_valid() {
            return None;
        }
        let sizes = subtree_sizes(&code.0);
        let pos = std::cell::Cell::new(0usize);
        let mut prob = BigRational::one();
        let mut ok = true;
        // a root decision is answered by the next entry of the code, a split
        // decision by the size of the subtree starting there
        self.walk(
            |decision, choice| {
                let answer = match decision {
                    Decision::Root => code.0[pos.get()] as usize,
                    Decision::Split => sizes[pos.get()],
                };
                match choice.probability(answer) {
                    Some(p) => prob *= p,
                    None => ok = false,
                }
                answer
            },
            |_| pos.set(pos.get() + 1),
        );
        ok.then_some(prob)
    }

    /// Drives the decision process; `decide` answers each choice and `emit`
    /// receives child counts in preorder.
    fn walk(&self, mut decide: impl FnMut(Decision, &Choice) -> usize, mut emit: impl FnMut(usize)) {
        enum Task {
            Tree(usize),
            Forest(usize, usize),
        }
        let mut stack = vec![Task::Tree(self.n as usize)];
        while let Some(task) = stack.pop() {
            match task {
                Task::Tree(m) => {
                    let i = decide(Decision::Root, &self.root[m]);
                    emit(i);
                    stack.push(Task::Forest(i, m - 1));
                }
                Task::Forest(0, _) => {}
                Task::Forest(1, m) => stack.push(Task::Tree(m)),
                Task::Forest(j, m) => {
                    let a = decide(Decision::Split, &self.split[j][m]);
                    stack.push(Task::Forest(j - 1, m - a));
                    stack.push(Task::Tree(a));
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Decision {
    /// Child count of a subtree's root.
    Root,
    /// Size of the first tree of a forest.
    Split,
}

/// Size of the subtree rooted at each position of a Łukasiewicz word.
fn subtree_sizes(code: &[u32]) -> Vec<usize> {
    let mut sizes = vec![0; code.len()];
    for i in (0..code.len()).rev() {
        let mut size = 1;
        let mut j = i + 1;
        for _ in 0..code[i] {
            size += sizes[j];
            j += sizes[j];
        }
        sizes[i] = size;
    }
    sizes
}

/// One uniformly random tree, deterministic in `seed`.
pub fn sample_tree_uniform(set: &ChildSet, n: u64, seed: u64) -> Result<TreeCode> {
    let sampler = UniformSampler::new(set, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sampler.sample(&mut rng))
}

/// Sample mean of `X_{s1}^p1 X_{s2}^p2` over uniform random trees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

pub fn monte_carlo_moment(
    set: &ChildSet,
    n: u64,
    (s1, s2): (u32, Option<u32>),
    (p1, p2): (u32, u32),
    samples: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::InvalidQuery("samples must be at least 1".into()));
    }
    let sampler = UniformSampler::new(set, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for k in 1..=samples {
        let t = sampler.sample(&mut rng);
        let mut v = (t.count(s1) as f64).powi(p1 as i32);
        if let Some(s2) = s2 {
            v *= (t.count(s2) as f64).powi(p2 as i32);
        }
        let delta = v - mean;
        mean += delta / k as f64;
        m2 += delta * (v - mean);
    }
    let var = if samples > 1 { m2 / (samples - 1) as f64 } else { 0.0 };
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / samples as f64).sqrt(),
        samples,
    })
}
