use std::fmt;

pub const NVARS: usize = 7;

/// The variables a rational function may depend on, in monomial-order priority.
///
/// `A`, `B1`, `B2`, `C` stand for the F1 parameters (alpha, beta1, beta2, gamma)
/// when a relation is generic, and `A` doubles as the free parameter of a
/// specialized family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    A,
    B1,
    B2,
    C,
    X,
    Y,
    N,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::A, Var::B1, Var::B2, Var::C, Var::X, Var::Y, Var::N];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::A => "a",
            Var::B1 => "b1",
            Var::B2 => "b2",
            Var::C => "c",
            Var::X => "x",
            Var::Y => "y",
            Var::N => "n",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
