//! Text format for generator matrices.
//!
//! ```text
//! # comment
//! q 8          # field order
//! mod 11       # modulus a^3 + a + 1, digit-packed; required iff q is not prime
//! k 3
//! n 5
//! row 1 2 6 2 3
//! row 2 3 2 5 7
//! row 4 2 6 4 3
//! ```
//!
//! Tokens are whitespace separated and `#` starts a comment that runs to the
//! end of the line. Entries use the same digit packing as the modulus.

use crate::error::{Error, Result};
use crate::gfield::FieldSpec;
use crate::gfmatrix::GenMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub q: u32,
    pub modulus: Option<u32>,
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing value for `{what}`")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("`{tok}` is not a valid value for `{what}`")))
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut q = None;
        let mut modulus = None;
        let mut k = None;
        let mut n = None;
        let mut rows = Vec::new();
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("");
            let mut toks = content.split_whitespace();
            let Some(directive) = toks.next() else {
                continue;
            };
            match directive {
                "q" | "mod" | "k" | "n" => {
                    let taken = match directive {
                        "q" => q.replace(number::<u32>(toks.next(), line, "q")?).is_some(),
                        "mod" => modulus
                            .replace(number::<u32>(toks.next(), line, "mod")?)
                            .is_some(),
                        "k" => k
                            .replace(number::<usize>(toks.next(), line, "k")?)
                            .is_some(),
                        _ => n
                            .replace(number::<usize>(toks.next(), line, "n")?)
                            .is_some(),
                    };
                    if taken {
                        return Err(parse_err(
                            line,
                            format!("duplicate `{directive}` directive"),
                        ));
                    }
                    if let Some(extra) = toks.next() {
                        return Err(parse_err(line, format!("unexpected token `{extra}`")));
                    }
                }
                "row" => {
                    let (Some(q), Some(n)) = (q, n) else {
                        return Err(parse_err(line, "`row` before `q` and `n` are declared"));
                    };
                    let row = toks
                        .map(|t| number::<u32>(Some(t), line, "row entry"))
                        .collect::<Result<Vec<_>>>()?;
                    if row.len() != n {
                        return Err(parse_err(
                            line,
                            format!("row has {} entries, expected n = {n}", row.len()),
                        ));
                    }
                    if let Some(bad) = row.iter().find(|&&v| v >= q) {
                        return Err(parse_err(line, format!("entry {bad} is not in [0, {q})")));
                    }
                    rows.push(row);
                }
                other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
            }
        }

        let missing = |what: &str| parse_err(last_line, format!("missing `{what}` directive"));
        let q = q.ok_or_else(|| missing("q"))?;
        let k = k.ok_or_else(|| missing("k"))?;
        let n = n.ok_or_else(|| missing("n"))?;
        if rows.len() != k {
            return Err(parse_err(
                last_line,
                format!("found {} rows, expected k = {k}", rows.len()),
            ));
        }
        Ok(MatrixFile {
            q,
            modulus,
            k,
            n,
            rows,
        })
    }

    pub fn field(&self) -> Result<FieldSpec> {
        FieldSpec::from_order(self.q, self.modulus)
    }

    /// Builds the generator matrix, enforcing its invariants.
    pub fn to_gen_matrix(&self) -> Result<GenMatrix> {
        GenMatrix::from_rows(&self.field()?, &self.rows)
    }
}

pub fn load(text: &str) -> Result<GenMatrix> {
    MatrixFile::parse(text)?.to_gen_matrix()
}
