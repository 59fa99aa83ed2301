//! Truth-table Boolean functions and (partial) assignments.
//!
//! Variable `i` is bit `i` of an assignment index, so table position `b`
//! holds `f(b_0, b_1, ..., b_{n-1})`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::caps::{self, Caps, MAX_VARIABLES};
use crate::error::{Error, Result};

/// A full assignment to `n` variables, encoded as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    n: usize,
    bits: u32,
}

impl Assignment {
    pub fn new(n: usize, bits: u32) -> Self {
        debug_assert!(n <= MAX_VARIABLES && (n == 32 || bits >> n == 0));
        Assignment { n, bits }
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let bits = values.iter().enumerate().fold(0u32, |acc, (i, &v)| acc | (u32::from(v) << i));
        Assignment { n: values.len(), bits }
    }

    /// Parses a bit string, `x0` first.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (i, ch) in text.trim().chars().enumerate() {
            match ch {
                '0' => values.push(false),
                '1' => values.push(true),
                _ => return Err(Error::parse(1, i + 1, format!("expected 0 or 1, found {ch:?}"))),
            }
        }
        if values.len() > MAX_VARIABLES {
            return Err(Error::Invalid(format!("assignment longer than {MAX_VARIABLES} bits")));
        }
        Ok(Assignment::from_bools(&values))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn get(&self, var: usize) -> bool {
        self.bits >> var & 1 == 1
    }

    pub fn ones(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn with(mut self, var: usize, value: bool) -> Self {
        self.bits = (self.bits & !(1 << var)) | (u32::from(value) << var);
        self
    }

    /// `σ_U` for the variable set `mask`.
    pub fn project(&self, mask: u32) -> PartialAssignment {
        PartialAssignment { n: self.n, mask, values: self.bits & mask }
    }

    pub fn to_partial(&self) -> PartialAssignment {
        self.project(full_mask(self.n))
    }

    pub fn all(n: usize) -> impl Iterator<Item = Assignment> {
        (0..1u32 << n).map(move |bits| Assignment { n, bits })
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A map from some variables to values in {0,1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    n: usize,
    mask: u32,
    values: u32,
}

impl PartialAssignment {
    pub fn empty(n: usize) -> Self {
        PartialAssignment { n, mask: 0, values: 0 }
    }

    pub fn from_masks(n: usize, mask: u32, values: u32) -> Self {
        PartialAssignment { n, mask, values: values & mask }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, bool)]) -> Result<Self> {
        let mut p = PartialAssignment::empty(n);
        for &(var, value) in pairs {
            p = p.bind(var, value)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn values(&self) -> u32 {
        self.values
    }

    pub fn bind(mut self, var: usize, value: bool) -> Result<Self> {
        if var >= self.n {
            return Err(Error::VariableOutOfRange { var, n: self.n });
        }
        self.mask |= 1 << var;
        self.values = (self.values & !(1 << var)) | (u32::from(value) << var);
        Ok(self)
    }

    pub fn unbind(mut self, var: usize) -> Self {
        self.mask &= !(1 << var);
        self.values &= !(1 << var);
        self
    }

    pub fn get(&self, var: usize) -> Option<bool> {
        (self.mask >> var & 1 == 1).then(|| self.values >> var & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.n)
    }

    pub fn ones(&self) -> usize {
        self.values.count_ones() as usize
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    pub fn to_assignment(&self) -> Result<Assignment> {
        let missing = full_mask(self.n) & !self.mask;
        if missing != 0 {
            return Err(Error::IncompleteAssignment(missing.trailing_zeros() as usize));
        }
        Ok(Assignment { n: self.n, bits: self.values })
    }

    /// Bound variables in index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        bits_of(self.mask).map(move |v| (v, self.values >> v & 1 == 1))
    }

    pub fn agrees_with(&self, a: &Assignment) -> bool {
        a.bits & self.mask == self.values
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str(match self.get(i) {
                Some(true) => "1",
                Some(false) => "0",
                None => "*",
            })?;
        }
        Ok(())
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn bits_of(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

const UNDETERMINED: u8 = 2;

/// For every one of the 3^n partial assignments, the value it forces (or
/// none). Built once per function by dynamic programming over the lowest
/// free variable.
#[derive(Debug)]
pub struct DeterminationTable {
    n: usize,
    ternary: Vec<u32>,
    forced: Vec<u8>,
}

impl DeterminationTable {
    fn build(f: &BooleanFunction) -> Self {
        let n = f.n;
        let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
        let size = 3usize.pow(n as u32);
        let mut forced = vec![0u8; size];
        let mut digits = vec![0u8; n];
        for p in 0..size {
            forced[p] = match digits.iter().position(|&d| d == 2) {
                None => {
                    let bits = digits.iter().enumerate().fold(0u32, |acc, (i, &d)| acc | (u32::from(d) << i));
                    u8::from(f.value(bits))
                }
                Some(i) => {
                    let zero = forced[p - 2 * pow3[i]];
                    let one = forced[p - pow3[i]];
                    if zero == one {
                        zero
                    } else {
                        UNDETERMINED
                    }
                }
            };
            for d in digits.iter_mut() {
                if *d == 2 {
                    *d = 0;
                } else {
                    *d += 1;
                    break;
                }
            }
        }
        let ternary = (0..1u32 << n)
            .map(|m| bits_of(m).map(|i| pow3[i] as u32).sum())
            .collect();
        DeterminationTable { n, ternary, forced }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Base-3 index of a partial assignment: digit 0/1 for bound values,
    /// digit 2 for free variables.
    pub fn index(&self, mask: u32, values: u32) -> usize {
        let free = full_mask(self.n) & !mask;
        (self.ternary[(values & mask) as usize] + 2 * self.ternary[free as usize]) as usize
    }

    pub fn forced(&self, mask: u32, values: u32) -> Option<bool> {
        self.forced_at(self.index(mask, values))
    }

    pub(crate) fn forced_at(&self, index: usize) -> Option<bool> {
        match self.forced[index] {
            UNDETERMINED => None,
            v => Some(v == 1),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.forced.len()
    }

    pub(crate) fn pow3(&self, i: usize) -> usize {
        self.ternary[1 << i] as usize
    }
}

/// A Boolean function given by its full truth table.
#[derive(Clone)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
    determination: OnceLock<Arc<DeterminationTable>>,
}

impl PartialEq for BooleanFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.words == other.words
    }
}

impl Eq for BooleanFunction {}

impl std::hash::Hash for BooleanFunction {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.words.hash(state);
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n={}, {})", self.n, self.to_hex())
    }
}

impl BooleanFunction {
    pub fn from_fn(n: usize, mut f: impl FnMut(Assignment) -> bool) -> Result<Self> {
        caps::check_table(n)?;
        let size = 1usize << n;
        let mut words = vec![0u64; size.div_ceil(64)];
        for bits in 0..size as u32 {
            if f(Assignment { n, bits }) {
                words[bits as usize / 64] |= 1 << (bits % 64);
            }
        }
        Ok(BooleanFunction { n, words, determination: OnceLock::new() })
    }

    pub fn from_table(table: &[bool]) -> Result<Self> {
        let n = table.len().trailing_zeros() as usize;
        if !table.len().is_power_of_two() {
            return Err(Error::Invalid(format!("table length {} is not a power of two", table.len())));
        }
        Self::from_fn(n, |a| table[a.bits as usize])
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, index: u32) -> bool {
        self.words[index as usize / 64] >> (index % 64) & 1 == 1
    }

    pub fn eval(&self, a: Assignment) -> bool {
        self.value(a.bits)
    }

    /// Evaluates `f` on a partial assignment that must bind every variable.
    pub fn evaluate(&self, p: &PartialAssignment) -> Result<bool> {
        Ok(self.eval(p.to_assignment()?))
    }

    pub fn table(&self) -> Vec<bool> {
        (0..1u32 << self.n).map(|b| self.value(b)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `Some(v)` when `f` is the constant `v`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == 1 << self.n => Some(true),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// The shared 3^n determination table; `None` above the proof cap.
    pub fn determination(&self) -> Option<&DeterminationTable> {
        if self.n > Caps::current().proof_n {
            return None;
        }
        Some(self.determination.get_or_init(|| Arc::new(DeterminationTable::build(self))))
    }

    pub fn determination_table(&self) -> Result<&DeterminationTable> {
        caps::check_proof(self.n)?;
        Ok(self.determination().expect("within cap"))
    }

    /// The value forced by `p`, if every completion agrees.
    pub fn is_determined(&self, p: &PartialAssignment) -> Option<bool> {
        match self.determination() {
            Some(t) => t.forced(p.mask, p.values),
            None => self.is_determined_brute(p),
        }
    }

    /// Completion-by-completion determination check, independent of the
    /// determination table.
    pub fn is_determined_brute(&self, p: &PartialAssignment) -> Option<bool> {
        let free = full_mask(self.n) & !p.mask;
        let mut sub = free;
        let first = self.value(p.values);
        loop {
            if self.value(p.values | sub) != first {
                return None;
            }
            if sub == 0 {
                return Some(first);
            }
            sub = (sub - 1) & free;
        }
    }

    /// `f_Y` on the variables `p` leaves free.
    pub fn restrict(&self, p: &PartialAssignment) -> Result<Restriction> {
        if p.n != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: p.n });
        }
        if p.is_full() {
            return Err(Error::UseEvaluate);
        }
        Ok(self.restrict_unchecked(p.mask, p.values))
    }

    pub(crate) fn restrict_unchecked(&self, mask: u32, values: u32) -> Restriction {
        let vars: Vec<usize> = bits_of(full_mask(self.n) & !mask).collect();
        let function = self.project_onto(&vars, values & mask);
        Restriction { function, vars }
    }

    fn project_onto(&self, vars: &[usize], base: u32) -> BooleanFunction {
        let k = vars.len();
        let size = 1usize << k;
        let mut words = vec![0u64; size.div_ceil(64)];
        for b in 0..size as u32 {
            let mut idx = base;
            for (j, &v) in vars.iter().enumerate() {
                idx |= (b >> j & 1) << v;
            }
            if self.value(idx) {
                words[b as usize / 64] |= 1 << (b % 64);
            }
        }
        BooleanFunction { n: k, words, determination: OnceLock::new() }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        (0..1u32 << self.n).any(|b| b >> var & 1 == 0 && self.value(b) != self.value(b | 1 << var))
    }

    pub fn essential_mask(&self) -> u32 {
        (0..self.n).filter(|&v| self.depends_on(v)).fold(0, |m, v| m | 1 << v)
    }

    /// The same function on its essential variables only.
    pub fn essential(&self) -> Restriction {
        let vars: Vec<usize> = bits_of(self.essential_mask()).collect();
        let function = self.project_onto(&vars, 0);
        Restriction { function, vars }
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.n).all(|v| (0..1u32 << self.n).all(|b| b >> v & 1 == 1 || !self.value(b) || self.value(b | 1 << v)))
    }

    pub fn negated(&self) -> BooleanFunction {
        BooleanFunction::from_fn(self.n, |a| !self.eval(a)).expect("same size")
    }

    /// `x ↦ f(x ⊕ flip)`.
    pub fn with_inputs_flipped(&self, flip: u32) -> BooleanFunction {
        BooleanFunction::from_fn(self.n, |a| self.value(a.bits ^ flip)).expect("same size")
    }

    pub fn is_symmetric(&self) -> bool {
        let mut seen: Vec<Option<bool>> = vec![None; self.n + 1];
        (0..1u32 << self.n).all(|b| {
            let slot = &mut seen[b.count_ones() as usize];
            match slot {
                Some(v) => *v == self.value(b),
                None => {
                    *slot = Some(self.value(b));
                    true
                }
            }
        })
    }

    /// Hex digits, little-endian by assignment index: bit `t` of digit `j`
    /// is `f(4j + t)`.
    pub fn to_hex(&self) -> String {
        let size = 1usize << self.n;
        (0..size.div_ceil(4))
            .map(|j| {
                let digit = (0..4)
                    .filter(|t| 4 * j + t < size && self.value((4 * j + t) as u32))
                    .fold(0u32, |acc, t| acc | 1 << t);
                char::from_digit(digit, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        caps::check_table(n)?;
        let size = 1usize << n;
        let digits: Vec<u32> = hex
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| c.to_digit(16).ok_or_else(|| Error::parse(2, i + 1, format!("not a hex digit: {c:?}"))))
            .collect::<Result<_>>()?;
        if digits.len() != size.div_ceil(4) {
            return Err(Error::parse(
                2,
                1,
                format!("expected {} hex digits for n = {n}, found {}", size.div_ceil(4), digits.len()),
            ));
        }
        if size < 4 && digits[0] >> size != 0 {
            return Err(Error::parse(2, 1, "bits set beyond the table"));
        }
        Self::from_fn(n, |a| digits[a.bits as usize / 4] >> (a.bits % 4) & 1 == 1)
    }

    /// The two-line truth-table file format: `n`, then the hex table.
    pub fn to_table_file(&self) -> String {
        format!("{}\n{}\n", self.n, self.to_hex())
    }

    pub fn parse_table_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let first = lines.next().ok_or_else(|| Error::parse(1, 1, "missing variable count"))?;
        let n: usize = first.trim().parse().map_err(|_| Error::parse(1, 1, format!("bad variable count {first:?}")))?;
        if n == 0 || n > MAX_VARIABLES {
            return Err(Error::parse(1, 1, format!("variable count must be in 1..={MAX_VARIABLES}")));
        }
        let hex = lines.next().ok_or_else(|| Error::parse(2, 1, "missing truth table"))?;
        Self::from_hex(n, hex)
    }
}

/// A restricted function together with the original index of each of its
/// variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub function: BooleanFunction,
    pub vars: Vec<usize>,
}

impl Restriction {
    /// Maps a variable of the restricted function back to the original.
    pub fn original(&self, var: usize) -> usize {
        self.vars[var]
    }

    /// Maps an original variable to its index in the restriction.
    pub fn local(&self, original: usize) -> Option<usize> {
        self.vars.iter().position(|&v| v == original)
    }
}
