use std::fmt;
use std::sync::Arc;

/// One of the four independent variables, ordered `y < z < ȳ < z̄`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Coordinate {
    Y,
    Z,
    Yb,
    Zb,
}

impl Coordinate {
    pub const ALL: [Coordinate; 4] = [Coordinate::Y, Coordinate::Z, Coordinate::Yb, Coordinate::Zb];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Coordinate {
        Self::ALL[i]
    }

    /// Grammar spelling: `y`, `z`, `yb`, `zb`.
    pub fn name(self) -> &'static str {
        match self {
            Coordinate::Y => "y",
            Coordinate::Z => "z",
            Coordinate::Yb => "yb",
            Coordinate::Zb => "zb",
        }
    }

    pub fn from_name(s: &str) -> Option<Coordinate> {
        Some(match s {
            "y" => Coordinate::Y,
            "z" => Coordinate::Z,
            "yb" => Coordinate::Yb,
            "zb" => Coordinate::Zb,
            _ => return None,
        })
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Derivative orders per coordinate, indexed by [`Coordinate::index`].
pub type MultiIndex = [u8; 4];

pub fn unit(c: Coordinate) -> MultiIndex {
    let mut m = [0; 4];
    m[c.index()] = 1;
    m
}

/// Relation imposed on the jets of an abstract characteristic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Relation {
    /// No relation: all jets are independent.
    Free,
    /// The PSDYM symmetry condition, oriented to eliminate the `yȳ` jet:
    /// `Φ_{yȳ} → −Φ_{zz̄} − [X_z̄, Φ_ȳ] + [X_ȳ, Φ_z̄]`.
    PsdymSymmetry,
}

/// An abstract characteristic or probe function (the `Q`, `Φ` of a generic
/// symmetry, or an arbitrary test function).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenericId {
    pub name: Arc<str>,
    pub relation: Relation,
}

impl GenericId {
    pub fn free(name: &str) -> Self {
        Self { name: name.into(), relation: Relation::Free }
    }

    pub fn psdym_symmetry(name: &str) -> Self {
        Self { name: name.into(), relation: Relation::PsdymSymmetry }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    J,
    Jinv,
    X,
    /// Basis element `τ_{k+1}` of the session Lie basis (zero-based).
    Tau(u8),
    /// Named constant matrix such as `M`.
    Const(Arc<str>),
    Generic(GenericId),
    /// A covering variable from the nonlocal registry.
    Nonlocal(u32),
}

impl Var {
    pub fn is_constant(&self) -> bool {
        matches!(self, Var::Tau(_) | Var::Const(_))
    }
}

/// A dependent variable together with its derivative multi-index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetAtom {
    pub var: Var,
    pub index: MultiIndex,
}

impl JetAtom {
    pub fn new(var: Var) -> Self {
        Self { var, index: [0; 4] }
    }

    pub fn with_index(var: Var, index: MultiIndex) -> Self {
        Self { var, index }
    }

    pub fn order(&self) -> u32 {
        self.index.iter().map(|&k| k as u32).sum()
    }

    pub fn order_in(&self, c: Coordinate) -> u8 {
        self.index[c.index()]
    }

    pub fn bumped(&self, c: Coordinate) -> JetAtom {
        let mut a = self.clone();
        a.index[c.index()] += 1;
        a
    }

    /// Jet with one fewer `c`-derivative, if there is one to remove.
    pub fn lowered(&self, c: Coordinate) -> Option<JetAtom> {
        if self.index[c.index()] == 0 {
            return None;
        }
        let mut a = self.clone();
        a.index[c.index()] -= 1;
        Some(a)
    }

    pub fn base_name(&self) -> String {
        match &self.var {
            Var::J => "J".into(),
            Var::Jinv => "Jinv".into(),
            Var::X => "X".into(),
            Var::Tau(k) => format!("tau{}", k + 1),
            Var::Const(n) => n.to_string(),
            Var::Generic(g) => g.name.to_string(),
            Var::Nonlocal(id) => format!("W{id}"),
        }
    }
}

impl fmt::Display for JetAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base_name())?;
        if self.order() > 0 {
            f.write_str("_")?;
            for c in Coordinate::ALL {
                for _ in 0..self.index[c.index()] {
                    f.write_str(c.name())?;
                }
            }
        }
        Ok(())
    }
}
