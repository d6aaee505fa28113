//! Graded presentations and their text format.
//!
//! ```text
//! # comment
//! field gf 5
//! unital true
//! generators x:1 y:1
//! rel x*y - y*x
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::expr;
use crate::free::{parse_free, Alphabet, FreeElement};
use crate::scalar::FieldSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    alphabet: Alphabet,
    field: FieldSpec,
    relations: Vec<FreeElement>,
    unital: bool,
}

impl Presentation {
    pub fn new(
        alphabet: Alphabet,
        field: FieldSpec,
        relations: Vec<FreeElement>,
        unital: bool,
    ) -> Result<Self> {
        for r in &relations {
            check_relation(&alphabet, field, r)?;
        }
        Ok(Presentation { alphabet, field, relations, unital })
    }

    /// The free algebra on the given alphabet.
    pub fn free(alphabet: Alphabet, field: FieldSpec, unital: bool) -> Self {
        Presentation { alphabet, field, relations: Vec::new(), unital }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn relations(&self) -> &[FreeElement] {
        &self.relations
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn with_unital(mut self, unital: bool) -> Self {
        self.unital = unital;
        self
    }

    pub fn add_relation(&mut self, r: FreeElement) -> Result<()> {
        check_relation(&self.alphabet, self.field, &r)?;
        self.relations.push(r);
        Ok(())
    }

    /// Adds every word of degree `d` as a relation, killing all of degree `d` and above.
    pub fn kill_degree(&mut self, d: usize) -> Result<()> {
        for w in self.alphabet.words_of_degree(d) {
            self.add_relation(FreeElement::word(self.field, w))?;
        }
        Ok(())
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().filter_map(|r| r.maxdeg().ok()).max().unwrap_or(0)
    }

    /// Parses the text format. `default_field` applies when no `field` line is given.
    pub fn parse(text: &str, default_field: FieldSpec) -> Result<Self> {
        let mut field = default_field;
        let mut unital = false;
        let mut alphabet: Option<Alphabet> = None;
        let mut rels: Vec<(usize, usize, &str)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = line.len() - trimmed.len();
            let (key, rest) = match trimmed.find(char::is_whitespace) {
                Some(i) => (&trimmed[..i], &trimmed[i..]),
                None => (trimmed, ""),
            };
            let rest_col = indent + key.len() + 1;
            let at = |message: String| Error::ParseAt { line: line_no, column: indent + 1, message };
            match key {
                "field" => {
                    if alphabet.is_some() {
                        return Err(at("`field` must precede `generators`".into()));
                    }
                    field = rest.trim().parse().map_err(|e: Error| at(e.to_string()))?;
                }
                "unital" => {
                    unital = match rest.trim() {
                        "true" => true,
                        "false" => false,
                        other => return Err(at(format!("expected true or false, got `{other}`"))),
                    };
                }
                "generators" => {
                    if alphabet.is_some() {
                        return Err(at("duplicate `generators` line".into()));
                    }
                    let mut gens = Vec::new();
                    for tok in rest.split_whitespace() {
                        let (name, deg) = match tok.split_once(':') {
                            Some((n, d)) => {
                                let d: usize = d
                                    .parse()
                                    .map_err(|_| at(format!("bad degree in `{tok}`")))?;
                                (n.to_string(), d)
                            }
                            None => (tok.to_string(), 1),
                        };
                        gens.push((name, deg));
                    }
                    alphabet = Some(Alphabet::new(gens).map_err(|e| at(e.to_string()))?);
                }
                "rel" => {
                    if alphabet.is_none() {
                        return Err(at("`rel` before `generators`".into()));
                    }
                    rels.push((line_no, rest_col, rest));
                }
                other => return Err(at(format!("unknown directive `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::Parse("missing `generators` line".into()))?;
        let mut relations = Vec::new();
        for (line_no, col, src) in rels {
            let r = parse_free(&alphabet, field, src).map_err(|e| expr::at_line(e, line_no, col))?;
            check_relation(&alphabet, field, &r).map_err(|e| Error::ParseAt {
                line: line_no,
                column: col + 1,
                message: e.to_string(),
            })?;
            relations.push(r);
        }
        Ok(Presentation { alphabet, field, relations, unital })
    }
}

fn check_relation(alphabet: &Alphabet, field: FieldSpec, r: &FreeElement) -> Result<()> {
    if r.field() != field {
        return Err(Error::FieldMismatch(field, r.field()));
    }
    if r.is_zero() {
        return Err(Error::ZeroRelation);
    }
    if !r.is_homogeneous() {
        return Err(Error::InhomogeneousRelation(r.display(alphabet).to_string()));
    }
    if r.mindeg()? == 0 {
        return Err(Error::InhomogeneousRelation(format!(
            "constant relation {}",
            r.display(alphabet)
        )));
    }
    Ok(())
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {}", self.field)?;
        writeln!(f, "unital {}", self.unital)?;
        let gens: Vec<String> = self
            .alphabet
            .generators()
            .map(|(n, d)| format!("{n}:{d}"))
            .collect();
        writeln!(f, "generators {}", gens.join(" "))?;
        for r in &self.relations {
            writeln!(f, "rel {}", r.display(&self.alphabet))?;
        }
        Ok(())
    }
}
