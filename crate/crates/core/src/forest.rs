//! Series-parallel circuits encoded as decorated rooted forests.
//!
//! A [`Circuit`] is either a single component, a series chain, or a parallel
//! bundle. Composite nodes are kept flattened: a series node never holds a
//! series child and a parallel node never holds a parallel child. Children
//! stay in construction order, so structural equality is order-sensitive while
//! admittance is not.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Resistor,
    Inertance,
}

impl ComponentKind {
    pub fn symbol(self) -> char {
        match self {
            ComponentKind::Resistor => 'R',
            ComponentKind::Inertance => 'L',
        }
    }

    fn name(self) -> &'static str {
        match self {
            ComponentKind::Resistor => "resistor",
            ComponentKind::Inertance => "inertance",
        }
    }
}

/// A resistor (ohms) or inertance (henries) with a finite, strictly positive value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    kind: ComponentKind,
    value: f64,
}

impl Component {
    pub fn new(kind: ComponentKind, value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveValue(value));
        }
        Ok(Self { kind, value })
    }

    pub fn resistor(ohms: f64) -> Result<Self> {
        Self::new(ComponentKind::Resistor, ohms)
    }

    pub fn inertance(henries: f64) -> Result<Self> {
        Self::new(ComponentKind::Inertance, henries)
    }

    pub fn kind(&self) -> ComponentKind {
        self.kind
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Composition {
    Series,
    Parallel,
}

/// A series-parallel circuit.
///
/// The variants are public so that callers can pattern match; values built
/// through [`leaf`], [`compose`], [`graft`] and [`build_ladder_forest`] are
/// always canonical. Hand-built values can be brought into canonical form
/// with [`Circuit::canonicalize`].
#[derive(Debug, Clone, PartialEq)]
pub enum Circuit {
    Leaf(Component),
    Series(Vec<Circuit>),
    Parallel(Vec<Circuit>),
}

impl Circuit {
    /// Number of components.
    pub fn weight(&self) -> usize {
        match self {
            Circuit::Leaf(_) => 1,
            Circuit::Series(parts) | Circuit::Parallel(parts) => {
                parts.iter().map(Circuit::weight).sum()
            }
        }
    }

    /// Nesting depth; a single component has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Circuit::Leaf(_) => 1,
            Circuit::Series(parts) | Circuit::Parallel(parts) => {
                1 + parts.iter().map(Circuit::depth).max().unwrap_or(0)
            }
        }
    }

    pub fn composition(&self) -> Option<Composition> {
        match self {
            Circuit::Leaf(_) => None,
            Circuit::Series(_) => Some(Composition::Series),
            Circuit::Parallel(_) => Some(Composition::Parallel),
        }
    }

    /// Components in left-to-right reading order.
    pub fn components(&self) -> Vec<Component> {
        let mut out = Vec::with_capacity(self.weight());
        self.collect_components(&mut out);
        out
    }

    fn collect_components(&self, out: &mut Vec<Component>) {
        match self {
            Circuit::Leaf(c) => out.push(*c),
            Circuit::Series(parts) | Circuit::Parallel(parts) => {
                for p in parts {
                    p.collect_components(out);
                }
            }
        }
    }

    /// True when no composite node has a child of its own kind and every
    /// composite node has at least two children.
    pub fn is_canonical(&self) -> bool {
        match self {
            Circuit::Leaf(_) => true,
            Circuit::Series(parts) => {
                parts.len() >= 2
                    && parts
                        .iter()
                        .all(|p| !matches!(p, Circuit::Series(_)) && p.is_canonical())
            }
            Circuit::Parallel(parts) => {
                parts.len() >= 2
                    && parts
                        .iter()
                        .all(|p| !matches!(p, Circuit::Parallel(_)) && p.is_canonical())
            }
        }
    }

    /// Flattens nested same-kind composites, collapses single-child
    /// composites and drops empty ones. Children keep their order.
    ///
    /// Fails only when the whole circuit has no components.
    pub fn canonicalize(self) -> Result<Circuit> {
        match self {
            Circuit::Leaf(_) => Ok(self),
            Circuit::Series(parts) => rebuild(Composition::Series, parts),
            Circuit::Parallel(parts) => rebuild(Composition::Parallel, parts),
        }
    }
}

fn rebuild(kind: Composition, parts: Vec<Circuit>) -> Result<Circuit> {
    let mut flat = Vec::with_capacity(parts.len());
    for part in parts {
        if part.weight() == 0 {
            continue;
        }
        flatten_into(kind, part.canonicalize()?, &mut flat);
    }
    match flat.len() {
        0 => Err(Error::Arity {
            op: "canonicalize",
            min: 1,
            got: 0,
        }),
        1 => Ok(flat.pop().expect("one element")),
        _ => Ok(match kind {
            Composition::Series => Circuit::Series(flat),
            Composition::Parallel => Circuit::Parallel(flat),
        }),
    }
}

// `part` must already be canonical.
fn flatten_into(kind: Composition, part: Circuit, out: &mut Vec<Circuit>) {
    match (kind, part) {
        (Composition::Series, Circuit::Series(inner))
        | (Composition::Parallel, Circuit::Parallel(inner)) => out.extend(inner),
        (_, other) => out.push(other),
    }
}

pub fn leaf(c: Component) -> Circuit {
    Circuit::Leaf(c)
}

/// Series or parallel composition of at least two circuits, flattened.
pub fn compose(kind: Composition, parts: Vec<Circuit>) -> Result<Circuit> {
    if parts.len() < 2 {
        return Err(Error::Arity {
            op: "compose",
            min: 2,
            got: parts.len(),
        });
    }
    let mut flat = Vec::with_capacity(parts.len());
    for part in parts {
        flatten_into(kind, part.canonicalize()?, &mut flat);
    }
    Ok(match kind {
        Composition::Series => Circuit::Series(flat),
        Composition::Parallel => Circuit::Parallel(flat),
    })
}

pub fn series(parts: Vec<Circuit>) -> Result<Circuit> {
    compose(Composition::Series, parts)
}

pub fn parallel(parts: Vec<Circuit>) -> Result<Circuit> {
    compose(Composition::Parallel, parts)
}

/// The grafting map: `root` in series with the parallel bundle of `children`.
///
/// A single child is placed directly in series with the root.
pub fn graft(root: Component, children: Vec<Circuit>) -> Result<Circuit> {
    let below = match children.len() {
        0 => {
            return Err(Error::Arity {
                op: "graft",
                min: 1,
                got: 0,
            })
        }
        1 => children.into_iter().next().expect("one child"),
        _ => parallel(children)?,
    };
    series(vec![leaf(root), below])
}

/// Recursive ladder forest `F(a1,b1,…,an,bn) = a1·F(a2,b2,…) ⊗ b1`, closed by
/// `an ⊗ bn`. Each pair is `(inertance, resistance)`.
pub fn build_ladder_forest(decorations: &[(Component, Component)]) -> Result<Circuit> {
    if decorations.is_empty() {
        return Err(Error::Arity {
            op: "build_ladder_forest",
            min: 1,
            got: 0,
        });
    }
    for (i, (a, b)) in decorations.iter().enumerate() {
        check_kind(i + 1, a, ComponentKind::Inertance)?;
        check_kind(i + 1, b, ComponentKind::Resistor)?;
    }
    let (last_a, last_b) = decorations[decorations.len() - 1];
    let mut inner = Circuit::Parallel(vec![leaf(last_a), leaf(last_b)]);
    for &(a, b) in decorations.iter().rev().skip(1) {
        inner = Circuit::Parallel(vec![Circuit::Series(vec![leaf(a), inner]), leaf(b)]);
    }
    Ok(inner)
}

fn check_kind(stage: usize, c: &Component, expected: ComponentKind) -> Result<()> {
    if c.kind() != expected {
        return Err(Error::ComponentKind {
            stage,
            expected: expected.name(),
            found: c.kind().name(),
        });
    }
    Ok(())
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}",
            self.kind.symbol(),
            crate::report::fmt_real(self.value)
        )
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::format(self))
    }
}
