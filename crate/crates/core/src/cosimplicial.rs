//! Pushforwards of the codegeneracy and coface maps on `pi_2` generators,
//! extended to brackets by naturality.
//!
//! Level `n` carries the classes `x(i,j)` with `j <= n` and `y(k)` with
//! `k <= n`. A codegeneracy `s^l` leaves level `n` for level `n-1` and
//! forgets point `l+1`; a coface `d^l` leaves level `n` for level `n+1`.

use thiserror::Error;

use crate::bracket::{bracket_combos, Gen, LinearCombo, Term};
use crate::config_space::disjoint_support_vanishes;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosimplicialError {
    #[error("index {l} out of range for {kind} at level {level}")]
    IndexOutOfRange { kind: &'static str, l: u32, level: u32 },
    #[error("generator {gen} does not live at level {level}")]
    LevelMismatch { gen: Gen, level: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Codegeneracy { l: u32, source_level: u32 },
    Coface { l: u32, source_level: u32 },
}

impl Direction {
    pub fn codegeneracy(l: u32, source_level: u32) -> Result<Self, CosimplicialError> {
        if source_level == 0 || l + 1 > source_level {
            return Err(CosimplicialError::IndexOutOfRange { kind: "codegeneracy", l, level: source_level });
        }
        Ok(Direction::Codegeneracy { l, source_level })
    }

    pub fn coface(l: u32, source_level: u32) -> Result<Self, CosimplicialError> {
        if l > source_level + 1 {
            return Err(CosimplicialError::IndexOutOfRange { kind: "coface", l, level: source_level });
        }
        Ok(Direction::Coface { l, source_level })
    }

    pub fn source_level(&self) -> u32 {
        match *self {
            Direction::Codegeneracy { source_level, .. } | Direction::Coface { source_level, .. } => source_level,
        }
    }

    pub fn target_level(&self) -> u32 {
        match *self {
            Direction::Codegeneracy { source_level, .. } => source_level - 1,
            Direction::Coface { source_level, .. } => source_level + 1,
        }
    }
}

fn check_level(g: Gen, level: u32) -> Result<(), CosimplicialError> {
    let ok = match g {
        Gen::X(_, j) => j <= level,
        Gen::Y(k) => k <= level,
    };
    if ok {
        Ok(())
    } else {
        Err(CosimplicialError::LevelMismatch { gen: g, level })
    }
}

fn combo(gens: &[Gen]) -> LinearCombo {
    let mut c = LinearCombo::zero();
    for g in gens {
        c.add(&LinearCombo::gen(*g));
    }
    c
}

/// `s^l_*` on a generator at level `source_level`.
pub fn codegeneracy_push(l: u32, g: Gen, source_level: u32) -> Result<LinearCombo, CosimplicialError> {
    Direction::codegeneracy(l, source_level)?;
    check_level(g, source_level)?;
    Ok(match g {
        Gen::X(i, j) => {
            if l + 1 < i {
                combo(&[Gen::x(i - 1, j - 1)])
            } else if i - 1 < l && l + 1 < j {
                combo(&[Gen::x(i, j - 1)])
            } else if l + 1 > j {
                combo(&[g])
            } else {
                LinearCombo::zero()
            }
        }
        Gen::Y(k) => {
            if k == l + 1 {
                LinearCombo::zero()
            } else if k > l + 1 {
                combo(&[Gen::y(k - 1)])
            } else {
                combo(&[g])
            }
        }
    })
}

/// `d^l_*` on a generator at level `source_level`.
pub fn coface_push(l: u32, g: Gen, source_level: u32) -> Result<LinearCombo, CosimplicialError> {
    Direction::coface(l, source_level)?;
    check_level(g, source_level)?;
    Ok(match g {
        Gen::X(i, j) => {
            if l < i {
                combo(&[Gen::x(i + 1, j + 1)])
            } else if l == i {
                combo(&[Gen::x(i, j + 1), Gen::x(i + 1, j + 1)])
            } else if l < j {
                combo(&[Gen::x(i, j + 1)])
            } else if l == j {
                combo(&[Gen::x(i, j), Gen::x(i, j + 1)])
            } else {
                combo(&[g])
            }
        }
        Gen::Y(k) => {
            if l < k {
                combo(&[Gen::y(k + 1)])
            } else if l == k {
                combo(&[Gen::x(k, k + 1), Gen::y(k), Gen::y(k + 1)])
            } else {
                combo(&[g])
            }
        }
    })
}

pub fn push_generator(dir: Direction, g: Gen) -> Result<LinearCombo, CosimplicialError> {
    match dir {
        Direction::Codegeneracy { l, source_level } => codegeneracy_push(l, g, source_level),
        Direction::Coface { l, source_level } => coface_push(l, g, source_level),
    }
}

/// Naturality: push every leaf, expand, drop brackets of classes with
/// disjoint supports and cancel equal terms. No Hall normalization.
pub fn push_through_bracket(dir: Direction, t: &Term) -> Result<LinearCombo, CosimplicialError> {
    match t {
        Term::Leaf(g) => push_generator(dir, *g),
        Term::Br(a, b) => {
            let pa = push_through_bracket(dir, a)?;
            let pb = push_through_bracket(dir, b)?;
            Ok(bracket_combos(&pa, &pb, |u, v| !disjoint_support_vanishes(&Term::br(u.clone(), v.clone()))))
        }
    }
}

pub fn push_combo(dir: Direction, c: &LinearCombo) -> Result<LinearCombo, CosimplicialError> {
    let mut out = LinearCombo::zero();
    for (t, k) in c.iter() {
        out.add_scaled(&push_through_bracket(dir, t)?, k);
    }
    Ok(out)
}

/// All generators living at `level`.
pub fn level_generators(level: u32) -> Vec<Gen> {
    let mut v: Vec<Gen> = (2..=level).flat_map(|j| (1..j).map(move |i| Gen::x(i, j))).collect();
    v.extend((1..=level).map(Gen::y));
    v.sort();
    v
}

/// Composite of directions applied right to left: `dirs[0]` is applied last.
pub fn push_composite(dirs: &[Direction], c: &LinearCombo) -> Result<LinearCombo, CosimplicialError> {
    let mut cur = c.clone();
    for d in dirs.iter().rev() {
        cur = push_combo(*d, &cur)?;
    }
    Ok(cur)
}

/// A failed cosimplicial identity on one generator.
#[derive(Clone, Debug)]
pub struct IdentityFailure {
    pub identity: String,
    pub generator: Gen,
    pub level: u32,
    pub lhs: LinearCombo,
    pub rhs: LinearCombo,
}

/// Checks every cosimplicial identity between two structure maps on every
/// generator of levels `1..=max_level`. Returns the number of checks made.
pub fn check_cosimplicial_identities(max_level: u32) -> Result<(usize, Vec<IdentityFailure>), CosimplicialError> {
    use Direction::{Codegeneracy as S, Coface as D};
    let mut checks = 0;
    let mut failures = Vec::new();
    for n in 1..=max_level {
        for g in level_generators(n) {
            let x = LinearCombo::gen(g);
            let mut record = |name: String, lhs: LinearCombo, rhs: LinearCombo| {
                checks += 1;
                if lhs != rhs {
                    failures.push(IdentityFailure { identity: name, generator: g, level: n, lhs, rhs });
                }
            };
            // d^j d^i = d^i d^{j-1}, i < j, from level n to n+2
            for j in 0..=n + 2 {
                for i in 0..j {
                    let lhs = push_composite(&[D { l: j, source_level: n + 1 }, D { l: i, source_level: n }], &x)?;
                    let rhs = push_composite(&[D { l: i, source_level: n + 1 }, D { l: j - 1, source_level: n }], &x)?;
                    record(format!("d^{j} d^{i} = d^{i} d^{}", j - 1), lhs, rhs);
                }
            }
            // s^j s^i = s^i s^{j+1}, i <= j, from level n to n-2
            if n >= 2 {
                for j in 0..n - 1 {
                    for i in 0..=j {
                        let lhs = push_composite(&[S { l: j, source_level: n - 1 }, S { l: i, source_level: n }], &x)?;
                        let rhs =
                            push_composite(&[S { l: i, source_level: n - 1 }, S { l: j + 1, source_level: n }], &x)?;
                        record(format!("s^{j} s^{i} = s^{i} s^{}", j + 1), lhs, rhs);
                    }
                }
            }
            // s^j d^i, from level n back to level n
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = push_composite(&[S { l: j, source_level: n + 1 }, D { l: i, source_level: n }], &x)?;
                    let (name, rhs) = if i < j {
                        (
                            format!("s^{j} d^{i} = d^{i} s^{}", j - 1),
                            push_composite(&[D { l: i, source_level: n - 1 }, S { l: j - 1, source_level: n }], &x)?,
                        )
                    } else if i == j || i == j + 1 {
                        (format!("s^{j} d^{i} = id"), x.clone())
                    } else {
                        (
                            format!("s^{j} d^{i} = d^{} s^{j}", i - 1),
                            push_composite(&[D { l: i - 1, source_level: n - 1 }, S { l: j, source_level: n }], &x)?,
                        )
                    };
                    record(name, lhs, rhs);
                }
            }
        }
    }
    Ok((checks, failures))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn codegeneracy_table() {
        assert!(codegeneracy_push(0, Gen::x(1, 2), 2).unwrap().is_zero());
        assert_eq!(codegeneracy_push(0, Gen::x(2, 3), 3).unwrap(), LinearCombo::gen(Gen::x(1, 2)));
        assert_eq!(codegeneracy_push(1, Gen::x(1, 3), 3).unwrap(), LinearCombo::gen(Gen::x(1, 2)));
        assert!(codegeneracy_push(3, Gen::x(1, 3), 3).is_err());
        assert!(codegeneracy_push(0, Gen::x(1, 4), 3).is_err());
    }

    #[test]
    fn coface_table() {
        assert_eq!(coface_push(0, Gen::x(1, 2), 2).unwrap(), LinearCombo::gen(Gen::x(2, 3)));
        assert_eq!(coface_push(1, Gen::x(1, 2), 2).unwrap().to_string(), "x(1,3) + x(2,3)");
        assert_eq!(coface_push(1, Gen::y(1), 1).unwrap().to_string(), "x(1,2) + y(1) + y(2)");
        assert!(coface_push(4, Gen::x(1, 2), 2).is_err());
    }

    #[test]
    fn brackets() {
        let s0 = Direction::codegeneracy(0, 3).unwrap();
        assert!(push_through_bracket(s0, &t("[x13,x23]")).unwrap().is_zero());
        let d2 = Direction::coface(2, 3).unwrap();
        let c = t("[x13,[x13,x23]]");
        assert_eq!(push_through_bracket(Direction::coface(4, 3).unwrap(), &c).unwrap(), LinearCombo::term(c.clone()));
        let pure = t("[x13,x23]");
        let r = push_through_bracket(Direction::coface(3, 3).unwrap(), &pure).unwrap();
        let mut want = LinearCombo::term(pure.clone());
        want.add(&LinearCombo::term(t("[x14,x24]")));
        assert_eq!(r, want);
        // the repeated index keeps the mixed top-level terms alive
        assert_eq!(push_through_bracket(Direction::coface(3, 3).unwrap(), &c).unwrap().len(), 4);
        assert!(!push_through_bracket(d2, &c).unwrap().is_zero());
    }

    #[test]
    fn identities_low_levels() {
        let (n, f) = check_cosimplicial_identities(4).unwrap();
        assert!(n > 0);
        assert!(f.is_empty(), "{:?}", f.first());
    }
}
