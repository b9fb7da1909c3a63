//! Sparse SDPA (`.dat-s`) reading and writing.
//!
//! Layout: comment lines start with `*` or `"`; then the number of
//! constraints, the number of blocks, the signed block sizes (negative means
//! a diagonal block), the right-hand-side vector, and finally one
//! `matno blkno i j value` entry per line. Matrix 0 is the objective; block,
//! row, and column indices are 1-based and entries must be upper-triangular
//! within their block.

use crate::error::{Error, Result};
use crate::graph::SparsityGraph;

/// One nonzero of one coefficient matrix. `matrix` 0 is the objective
/// matrix, `1..=m` the constraint matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpaEntry {
    pub matrix: usize,
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

/// A sparse SDP in SDPA terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    /// Number of constraints (m).
    pub num_constraints: usize,
    /// Signed block sizes; negative values are diagonal blocks.
    pub block_structure: Vec<i64>,
    /// Right-hand-side vector of length `num_constraints`.
    pub rhs: Vec<f64>,
    pub entries: Vec<SdpaEntry>,
}

impl SdpProblem {
    /// Absolute size of a 1-based block.
    pub fn block_size(&self, block: usize) -> Result<usize> {
        self.block_structure
            .get(block.wrapping_sub(1))
            .map(|&s| s.unsigned_abs() as usize)
            .ok_or_else(|| Error::InvalidInput(format!("block {block} out of range")))
    }

    pub fn is_diagonal_block(&self, block: usize) -> bool {
        self.block_structure
            .get(block.wrapping_sub(1))
            .is_some_and(|&s| s < 0)
    }

    /// 1-based indices of the positive (semidefinite) blocks.
    pub fn psd_blocks(&self) -> Vec<usize> {
        self.block_structure
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

fn strip_grouping(line: &str) -> String {
    line.replace(['{', '}', '(', ')', ','], " ")
}

fn parse_with(text: &str, lenient: bool) -> Result<(SdpProblem, Vec<String>)> {
    let mut warnings = Vec::new();

    #[derive(PartialEq)]
    enum Stage {
        NumConstraints,
        NumBlocks,
        BlockSizes,
        Rhs,
        Entries,
    }

    let mut stage = Stage::NumConstraints;
    let mut m = 0usize;
    let mut num_blocks = 0usize;
    let mut block_structure: Vec<i64> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut entries: Vec<SdpaEntry> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('*') || line.starts_with('"') {
            continue;
        }
        let fail = |msg: String| Error::Parse { line: line_no, msg };

        match stage {
            Stage::NumConstraints => {
                let tok = strip_grouping(line);
                let tok = tok
                    .split_whitespace()
                    .next()
                    .ok_or_else(|| fail("missing constraint count".into()))?;
                m = tok
                    .parse()
                    .map_err(|_| fail(format!("invalid constraint count '{tok}'")))?;
                stage = Stage::NumBlocks;
            }
            Stage::NumBlocks => {
                let tok = strip_grouping(line);
                let tok = tok
                    .split_whitespace()
                    .next()
                    .ok_or_else(|| fail("missing block count".into()))?;
                num_blocks = tok
                    .parse()
                    .map_err(|_| fail(format!("invalid block count '{tok}'")))?;
                if num_blocks == 0 {
                    return Err(fail("block count must be positive".into()));
                }
                stage = Stage::BlockSizes;
            }
            Stage::BlockSizes => {
                for tok in strip_grouping(line).split_whitespace() {
                    let size: i64 = tok
                        .parse()
                        .map_err(|_| fail(format!("invalid block size '{tok}'")))?;
                    if size == 0 {
                        return Err(fail("block size must be nonzero".into()));
                    }
                    block_structure.push(size);
                }
                if block_structure.len() != num_blocks {
                    return Err(fail(format!(
                        "expected {num_blocks} block sizes, got {}",
                        block_structure.len()
                    )));
                }
                stage = if m == 0 { Stage::Entries } else { Stage::Rhs };
            }
            Stage::Rhs => {
                for tok in strip_grouping(line).split_whitespace() {
                    rhs.push(
                        tok.parse()
                            .map_err(|_| fail(format!("invalid rhs value '{tok}'")))?,
                    );
                }
                if rhs.len() != m {
                    return Err(fail(format!("expected {m} rhs values, got {}", rhs.len())));
                }
                stage = Stage::Entries;
            }
            Stage::Entries => {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 5 {
                    return Err(fail(format!(
                        "expected 'matno blkno i j value', got {} tokens",
                        toks.len()
                    )));
                }
                let matrix: usize = toks[0]
                    .parse()
                    .map_err(|_| fail(format!("invalid matrix index '{}'", toks[0])))?;
                let block: usize = toks[1]
                    .parse()
                    .map_err(|_| fail(format!("invalid block index '{}'", toks[1])))?;
                let mut row: usize = toks[2]
                    .parse()
                    .map_err(|_| fail(format!("invalid row '{}'", toks[2])))?;
                let mut col: usize = toks[3]
                    .parse()
                    .map_err(|_| fail(format!("invalid column '{}'", toks[3])))?;
                let value: f64 = toks[4]
                    .parse()
                    .map_err(|_| fail(format!("invalid value '{}'", toks[4])))?;

                if matrix > m {
                    return Err(fail(format!("matrix index {matrix} exceeds {m}")));
                }
                if block < 1 || block > num_blocks {
                    return Err(fail(format!("block index {block} out of range")));
                }
                let size = block_structure[block - 1].unsigned_abs() as usize;
                if row < 1 || row > size || col < 1 || col > size {
                    return Err(fail(format!(
                        "entry ({row}, {col}) outside block of size {size}"
                    )));
                }
                if block_structure[block - 1] < 0 && row != col {
                    return Err(fail(format!(
                        "off-diagonal entry ({row}, {col}) in diagonal block {block}"
                    )));
                }
                if row > col {
                    if lenient {
                        warnings.push(format!(
                            "line {line_no}: lower-triangular entry ({row}, {col}) symmetrized"
                        ));
                        std::mem::swap(&mut row, &mut col);
                    } else {
                        return Err(fail(format!(
                            "lower-triangular entry ({row}, {col}); upper-triangular required"
                        )));
                    }
                }
                if !value.is_finite() {
                    return Err(fail(format!("non-finite value '{}'", toks[4])));
                }
                entries.push(SdpaEntry {
                    matrix,
                    block,
                    row,
                    col,
                    value,
                });
            }
        }
    }

    if stage != Stage::Entries {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: "truncated file: header incomplete".into(),
        });
    }

    Ok((
        SdpProblem {
            num_constraints: m,
            block_structure,
            rhs,
            entries,
        },
        warnings,
    ))
}

/// Strict parse; rejects lower-triangular entries.
pub fn parse_sdpa(text: &str) -> Result<SdpProblem> {
    parse_with(text, false).map(|(p, _)| p)
}

/// Lenient parse: lower-triangular entries are symmetrized with a warning.
pub fn parse_sdpa_lenient(text: &str) -> Result<(SdpProblem, Vec<String>)> {
    parse_with(text, true)
}

/// Canonical serialization; `parse_sdpa(write_sdpa(p))` reproduces `p`
/// exactly (values carry 17 significant digits).
pub fn write_sdpa(p: &SdpProblem) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n", p.num_constraints));
    out.push_str(&format!("{}\n", p.block_structure.len()));
    let sizes: Vec<String> = p.block_structure.iter().map(i64::to_string).collect();
    out.push_str(&sizes.join(" "));
    out.push('\n');
    if p.num_constraints > 0 {
        let rhs: Vec<String> = p.rhs.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&rhs.join(" "));
        out.push('\n');
    }
    for e in &p.entries {
        out.push_str(&format!(
            "{} {} {} {} {:.16e}\n",
            e.matrix, e.block, e.row, e.col, e.value
        ));
    }
    out
}

/// Sparsity patterns of the objective matrix and every constraint matrix
/// restricted to one PSD block, in matrix order (objective first). Ready for
/// aggregation. Diagonal blocks have no pattern to decompose.
pub fn problem_patterns(p: &SdpProblem, block: usize) -> Result<Vec<SparsityGraph>> {
    let size = p.block_size(block)?;
    if p.is_diagonal_block(block) {
        return Err(Error::InvalidInput(format!(
            "block {block} is diagonal; decomposition applies to semidefinite blocks"
        )));
    }
    let mut per_matrix: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p.num_constraints + 1];
    for e in &p.entries {
        if e.block == block && e.row != e.col {
            per_matrix[e.matrix].push((e.row, e.col));
        }
    }
    per_matrix
        .into_iter()
        .map(|entries| SparsityGraph::from_entries(size, &entries))
        .collect()
}
