//! Finite groups given by Cayley tables: construction with exhaustive
//! validation, built-in families for testing, conjugacy classes, and
//! complex-valued functions on a group.

use num_complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

/// Largest group order the default constructors accept. The regular
/// representation is an `n x n` matrix per element, so everything downstream
/// is O(n^3) or worse; see [`Group::from_cayley_table_with_limit`] to raise it.
pub const MAX_GROUP_ORDER: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {order} exceeds the supported limit {limit}")]
    SizeLimit { order: usize, limit: usize },
    #[error("table row {row} has length {len}, expected {expected}")]
    TableNotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("{names} element names given for a table of order {order}")]
    NameCountMismatch { names: usize, order: usize },
    #[error("table[{row}][{col}] = {value} is out of range")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("table row {row} is not a permutation")]
    NotAPermutationRow { row: usize },
    #[error("table column {col} is not a permutation")]
    NotAPermutationColumn { col: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: usize },
    #[error("associativity fails at ({x}·{y})·{z} != {x}·({y}·{z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("function has {got} values for a group of order {expected}")]
    FunctionLength { expected: usize, got: usize },
}

/// Built-in group families. `Product` nests, so e.g. Z2 x Z2 x Q8 is
/// expressible without constructing intermediate tables by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinFamily {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion8,
    Symmetric(usize),
    Product(Box<BuiltinFamily>, Box<BuiltinFamily>),
}

/// A finite group presented by its Cayley table.
///
/// Elements are dense indices `0..n-1`; names are metadata only. Instances
/// are immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    n: usize,
    names: Vec<String>,
    /// Row-major `n*n` table; `table[x*n + y]` is the index of `x·y`.
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl Group {
    /// Validates a Cayley table and computes the identity and inverse data.
    ///
    /// Every group axiom is checked exhaustively — including the O(n^3)
    /// associativity scan — because a silently invalid table would poison
    /// every result downstream. Errors report the first violation in row-major
    /// scan order.
    pub fn from_cayley_table(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        Self::from_cayley_table_with_limit(names, table, MAX_GROUP_ORDER)
    }

    /// [`Group::from_cayley_table`] with a caller-chosen order limit.
    pub fn from_cayley_table_with_limit(
        names: Vec<String>,
        table: Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n > limit {
            return Err(GroupError::SizeLimit { order: n, limit });
        }
        if n == 0 {
            return Err(GroupError::NoIdentity);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::TableNotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        if names.len() != n {
            return Err(GroupError::NameCountMismatch {
                names: names.len(),
                order: n,
            });
        }
        for (row, r) in table.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { row, col, value });
                }
            }
        }
        let mut seen = vec![false; n];
        for (row, r) in table.iter().enumerate() {
            seen.fill(false);
            for &value in r {
                if seen[value] {
                    return Err(GroupError::NotAPermutationRow { row });
                }
                seen[value] = true;
            }
        }
        for col in 0..n {
            seen.fill(false);
            for r in &table {
                let value = r[col];
                if seen[value] {
                    return Err(GroupError::NotAPermutationColumn { col });
                }
                seen[value] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![0usize; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or(GroupError::MissingInverse { element: x })?;
            inverse[x] = y;
        }
        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return Err(GroupError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        Ok(Self {
            n,
            names,
            table: table.into_iter().flatten().collect(),
            identity,
            inverse,
        })
    }

    /// Constructs a member of one of the built-in families.
    pub fn builtin(family: &BuiltinFamily) -> Result<Self, GroupError> {
        match family {
            BuiltinFamily::Cyclic(n) => Self::cyclic(*n),
            BuiltinFamily::Dihedral(n) => Self::dihedral(*n),
            BuiltinFamily::Quaternion8 => Self::quaternion8(),
            BuiltinFamily::Symmetric(n) => Self::symmetric(*n),
            BuiltinFamily::Product(a, b) => {
                Self::product(&Self::builtin(a)?, &Self::builtin(b)?)
            }
        }
    }

    /// Cyclic group of order `n >= 1`; element `k` is named `g^k`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::UnsupportedParams(
                "cyclic group needs order >= 1".into(),
            ));
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::SizeLimit {
                order: n,
                limit: MAX_GROUP_ORDER,
            });
        }
        let names = (0..n).map(|k| format!("g^{k}")).collect();
        let table = (0..n)
            .map(|x| (0..n).map(|y| (x + y) % n).collect())
            .collect();
        Self::from_cayley_table(names, table)
    }

    /// Dihedral group of order `2n`, `n >= 2`: rotations `r^a` are indices
    /// `0..n-1`, reflections `s·r^a` are indices `n..2n-1`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 2 {
            return Err(GroupError::UnsupportedParams(
                "dihedral group needs n >= 2 (order 2n)".into(),
            ));
        }
        if 2 * n > MAX_GROUP_ORDER {
            return Err(GroupError::SizeLimit {
                order: 2 * n,
                limit: MAX_GROUP_ORDER,
            });
        }
        let names = (0..n)
            .map(|a| format!("r^{a}"))
            .chain((0..n).map(|a| format!("s·r^{a}")))
            .collect();
        // Element (f, a) = s^f r^a at index f*n + a, with s r^a s = r^-a:
        // (f, a)·(g, b) = (f xor g, b + (-1)^g a).
        let idx = |f: usize, a: usize| f * n + a;
        let mut table = vec![vec![0usize; 2 * n]; 2 * n];
        for f in 0..2 {
            for a in 0..n {
                for g in 0..2 {
                    for b in 0..n {
                        let c = if g == 0 { (a + b) % n } else { (n + b - a) % n };
                        table[idx(f, a)][idx(g, b)] = idx(f ^ g, c);
                    }
                }
            }
        }
        Self::from_cayley_table(names, table)
    }

    /// The quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion8() -> Result<Self, GroupError> {
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .map(String::from)
            .to_vec();
        // Element index = 2*basis + (negative ? 1 : 0), basis 1,i,j,k = 0..3.
        // Basis unit products as (sign_flip, basis): i^2=j^2=k^2=-1, ij=k,
        // jk=i, ki=j and anticommute.
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        let mut table = vec![vec![0usize; 8]; 8];
        for x in 0..8 {
            for y in 0..8 {
                let (flip, basis) = UNIT[x / 2][y / 2];
                let sign = (x % 2) ^ (y % 2) ^ usize::from(flip);
                table[x][y] = 2 * basis + sign;
            }
        }
        Self::from_cayley_table(names, table)
    }

    /// Symmetric group on `n <= 5` letters; elements are the permutations of
    /// `0..n-1` in lexicographic one-line order, composed as
    /// `(p·q)(i) = p(q(i))`, and named by their one-line notation.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::UnsupportedParams(
                "symmetric group supports 1 <= n <= 5".into(),
            ));
        }
        let perms = permutations_lex(n);
        let names = perms
            .iter()
            .map(|p| p.iter().map(ToString::to_string).collect::<String>())
            .collect();
        let rank = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let composed: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                        rank(&composed)
                    })
                    .collect()
            })
            .collect();
        Self::from_cayley_table(names, table)
    }

    /// Direct product; element `(a, b)` has index `a * b_order + b` and name
    /// `(name_a,name_b)`.
    pub fn product(a: &Group, b: &Group) -> Result<Self, GroupError> {
        let order = a.n.checked_mul(b.n).ok_or(GroupError::SizeLimit {
            order: usize::MAX,
            limit: MAX_GROUP_ORDER,
        })?;
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::SizeLimit {
                order,
                limit: MAX_GROUP_ORDER,
            });
        }
        let names = (0..a.n)
            .flat_map(|i| {
                (0..b.n).map(move |j| format!("({},{})", a.names[i], b.names[j]))
            })
            .collect();
        let idx = |i: usize, j: usize| i * b.n + j;
        let mut table = vec![vec![0usize; order]; order];
        for i1 in 0..a.n {
            for j1 in 0..b.n {
                for i2 in 0..a.n {
                    for j2 in 0..b.n {
                        table[idx(i1, j1)][idx(i2, j2)] =
                            idx(a.mul(i1, i2), b.mul(j1, j2));
                    }
                }
            }
        }
        Self::from_cayley_table(names, table)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Index of `x·y`.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// The Cayley table as nested rows (for serialization).
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| self.table[x * self.n..(x + 1) * self.n].to_vec())
            .collect()
    }

    /// Same multiplication table, ignoring names. This is the compatibility
    /// check used wherever two values must live on one group.
    pub fn same_structure(&self, other: &Group) -> bool {
        self.n == other.n && self.table == other.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|x| (x..self.n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Multiplicative order of element `x`.
    pub fn element_order(&self, x: usize) -> usize {
        let mut power = x;
        let mut k = 1;
        while power != self.identity {
            power = self.mul(power, x);
            k += 1;
        }
        k
    }

    /// Partition of the elements into conjugacy classes. Classes are sorted
    /// internally and listed by their smallest member, so the output is
    /// canonical; the identity's singleton class always comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if assigned[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.n)
                .map(|g| self.mul(self.mul(g, x), self.inverse[g]))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                assigned[y] = true;
            }
            classes.push(class);
        }
        classes
    }
}

/// All permutations of `0..n-1` in lexicographic order.
fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    fn recurse(
        n: usize,
        depth: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == n {
            out.push(current.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current[depth] = v;
                recurse(n, depth + 1, current, used, out);
                used[v] = false;
            }
        }
    }
    recurse(n, 0, &mut current, &mut used, &mut out);
    out
}

/// A complex-valued function on a group, stored as one value per element.
#[derive(Debug, Clone)]
pub struct GroupFunction {
    group: Arc<Group>,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: Arc<Group>, values: Vec<Complex64>) -> Result<Self, GroupError> {
        if values.len() != group.order() {
            return Err(GroupError::FunctionLength {
                expected: group.order(),
                got: values.len(),
            });
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(group: Arc<Group>, f: impl FnMut(usize) -> Complex64) -> Self {
        let values = group.elements().map(f).collect();
        Self { group, values }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest pointwise distance to another function on the same group.
    pub fn sup_distance(&self, other: &GroupFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}
