#![allow(dead_code)]

use ladderlab::{compose, leaf, Circuit, Complex64, Component, Composition, Stage};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo.log10()..=hi.log10()))
}

pub fn random_component(rng: &mut ChaCha8Rng) -> Component {
    let v = rng.gen_range(0.1..=10.0);
    if rng.gen_bool(0.5) {
        Component::resistor(v).unwrap()
    } else {
        Component::inertance(v).unwrap()
    }
}

/// Random series-parallel circuit with exactly `weight` components.
pub fn random_circuit(rng: &mut ChaCha8Rng, weight: usize) -> Circuit {
    if weight == 1 {
        return leaf(random_component(rng));
    }
    let arity = rng.gen_range(2..=weight.min(4));
    // Random composition of `weight` into `arity` positive parts.
    let mut cuts: Vec<usize> = Vec::new();
    while cuts.len() < arity - 1 {
        let c = rng.gen_range(1..weight);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(arity);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(weight)) {
        parts.push(random_circuit(rng, c - prev));
        prev = c;
    }
    let kind = if rng.gen_bool(0.5) {
        Composition::Series
    } else {
        Composition::Parallel
    };
    compose(kind, parts).unwrap()
}

pub fn random_stages(rng: &mut ChaCha8Rng, n: usize) -> Vec<Stage> {
    (0..n)
        .map(|_| Stage::new(rng.gen_range(0.1..=10.0), rng.gen_range(0.1..=10.0)))
        .collect()
}

/// Two-terminal network as a netlist between numbered nodes; node 0 is the
/// return rail and node 1 the input.
pub struct Netlist {
    pub nodes: usize,
    pub branches: Vec<(usize, usize, Component)>,
}

impl Netlist {
    /// Expands a series-parallel circuit into explicit nodes.
    pub fn from_circuit(c: &Circuit) -> Self {
        let mut net = Netlist {
            nodes: 2,
            branches: Vec::new(),
        };
        net.place(c, 1, 0);
        net
    }

    fn place(&mut self, c: &Circuit, a: usize, b: usize) {
        match c {
            Circuit::Leaf(comp) => self.branches.push((a, b, *comp)),
            Circuit::Parallel(parts) => {
                for p in parts {
                    self.place(p, a, b);
                }
            }
            Circuit::Series(parts) => {
                let mut from = a;
                for (k, p) in parts.iter().enumerate() {
                    let to = if k + 1 == parts.len() {
                        b
                    } else {
                        self.nodes += 1;
                        self.nodes - 1
                    };
                    self.place(p, from, to);
                    from = to;
                }
            }
        }
    }

    /// Ladder stages as explicit nodes: stage k has its shunt at node k and
    /// its inertance from node k to node k+1 (the last one to the rail).
    pub fn from_ladder(stages: &[Stage]) -> Self {
        let n = stages.len();
        let mut branches = Vec::new();
        for (k, s) in stages.iter().enumerate() {
            let node = k + 1;
            let next = if k + 1 == n { 0 } else { node + 1 };
            branches.push((node, 0, Component::resistor(s.resistance).unwrap()));
            branches.push((node, next, Component::inertance(s.inertance).unwrap()));
        }
        Netlist {
            nodes: n + 1,
            branches,
        }
    }

    /// Drives node 1 at one volt, solves the nodal equations `G·v = i` for
    /// the free nodes and returns the current drawn from the source.
    pub fn input_admittance(&self, omega: f64) -> Complex64 {
        let branch_y = |c: &Component| match c.kind() {
            ladderlab::ComponentKind::Resistor => Complex64::new(1.0 / c.value(), 0.0),
            ladderlab::ComponentKind::Inertance => {
                Complex64::new(1.0, 0.0) / Complex64::new(0.0, c.value() * omega)
            }
        };
        // Unknowns: nodes 2..nodes-1.
        let m = self.nodes - 2;
        let zero = Complex64::new(0.0, 0.0);
        let mut g = vec![vec![zero; m]; m];
        let mut rhs = vec![zero; m];
        for (a, b, comp) in &self.branches {
            let y = branch_y(comp);
            for (p, q) in [(*a, *b), (*b, *a)] {
                if p >= 2 {
                    g[p - 2][p - 2] += y;
                    match q {
                        0 => {}
                        1 => rhs[p - 2] += y,
                        _ => g[p - 2][q - 2] -= y,
                    }
                }
            }
        }
        let v_free = solve(g, rhs);
        let voltage = |node: usize| match node {
            0 => zero,
            1 => Complex64::new(1.0, 0.0),
            k => v_free[k - 2],
        };
        let mut current = zero;
        for (a, b, comp) in &self.branches {
            let y = branch_y(comp);
            if *a == 1 {
                current += y * (voltage(1) - voltage(*b));
            } else if *b == 1 {
                current += y * (voltage(1) - voltage(*a));
            }
        }
        current
    }
}

/// Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            let pivot_row = a[col].clone();
            for (x, &p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}
