//! Witness expressions over `1`, `+` and `*`.
//!
//! Rendered form: sums are written flat, every operand of a product other
//! than a bare `1` is parenthesized, and the outermost node is bare, e.g.
//! `(1+1)*(1+1+1)`. The parser also accepts `·` and `\cdot` for `*`.

use std::fmt;

use num_bigint::BigUint;

use crate::all_targets::{Choice, ComplexityTable};
use crate::single_target::Evaluator;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    One,
    Sum(Box<ExpressionTree>, Box<ExpressionTree>),
    Product(Box<ExpressionTree>, Box<ExpressionTree>),
}

/// An expression with its value and number of ones cached at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpressionTree {
    node: Node,
    value: BigUint,
    ones: u64,
}

impl ExpressionTree {
    pub fn one() -> Self {
        Self {
            node: Node::One,
            value: BigUint::from(1u8),
            ones: 1,
        }
    }

    pub fn sum(a: Self, b: Self) -> Self {
        Self {
            value: &a.value + &b.value,
            ones: a.ones + b.ones,
            node: Node::Sum(Box::new(a), Box::new(b)),
        }
    }

    pub fn product(a: Self, b: Self) -> Self {
        Self {
            value: &a.value * &b.value,
            ones: a.ones + b.ones,
            node: Node::Product(Box::new(a), Box::new(b)),
        }
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write_to(&mut s, false);
        s
    }

    fn write_to(&self, out: &mut String, product_operand: bool) {
        match &self.node {
            Node::One => out.push('1'),
            Node::Sum(a, b) => {
                if product_operand {
                    out.push('(');
                }
                a.write_to(out, false);
                out.push('+');
                b.write_to(out, false);
                if product_operand {
                    out.push(')');
                }
            }
            Node::Product(a, b) => {
                if product_operand {
                    out.push('(');
                }
                a.write_to(out, true);
                out.push('*');
                b.write_to(out, true);
                if product_operand {
                    out.push(')');
                }
            }
        }
    }
}

impl fmt::Display for ExpressionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Where a reconstruction reads its optimal splits from.
pub trait SplitSource {
    fn split(&mut self, v: u128) -> Result<Choice>;
}

impl SplitSource for &ComplexityTable {
    fn split(&mut self, v: u128) -> Result<Choice> {
        if v > self.n() as u128 {
            return Err(Error::OutOfRange(format!("{v} outside table 1..={}", self.n())));
        }
        self.choice(v as usize)
    }
}

impl SplitSource for Evaluator {
    fn split(&mut self, v: u128) -> Result<Choice> {
        Evaluator::split(self, v)
    }
}

/// Builds a minimal expression for `n` by following recorded or re-derived
/// splits. Multiplication wins ties, then the smallest operand.
pub fn reconstruct<S: SplitSource>(n: u128, source: &mut S) -> Result<ExpressionTree> {
    if n == 0 {
        return Err(Error::OutOfRange("no expression for 0".into()));
    }
    match source.split(n)? {
        Choice::One => Ok(ExpressionTree::one()),
        Choice::Add(i) => {
            let i = i as u128;
            let a = reconstruct(i, source)?;
            let b = reconstruct(n - i, source)?;
            Ok(ExpressionTree::sum(a, b))
        }
        Choice::Mul(j) => {
            let j = j as u128;
            let a = reconstruct(j, source)?;
            let b = reconstruct(n / j, source)?;
            Ok(ExpressionTree::product(a, b))
        }
    }
}

/// Reconstruction from a table built with choice recording.
pub fn reconstruct_from_table(n: u128, table: &ComplexityTable) -> Result<ExpressionTree> {
    let mut src = table;
    reconstruct(n, &mut src)
}

const MAX_DEPTH: usize = 512;

struct Parser {
    chars: Vec<char>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat_times(&mut self) -> bool {
        match self.peek() {
            Some('*') | Some('·') => {
                self.pos += 1;
                true
            }
            Some('\\') => {
                let word: String = self.chars[self.pos..].iter().take(5).collect();
                if word == "\\cdot" {
                    self.pos += 5;
                    true
                } else {
                    false
                }
            }
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<ExpressionTree> {
        let mut acc = self.term()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            let rhs = self.term()?;
            acc = ExpressionTree::sum(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExpressionTree> {
        let mut acc = self.factor()?;
        while self.eat_times() {
            let rhs = self.factor()?;
            acc = ExpressionTree::product(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ExpressionTree> {
        match self.peek() {
            Some('1') => {
                self.pos += 1;
                Ok(ExpressionTree::one())
            }
            Some('(') => {
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return self.err("nesting too deep");
                }
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                self.depth -= 1;
                Ok(inner)
            }
            Some(c) => self.err(format!("unexpected {c:?}, expected '1' or '('")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a witness expression. Positions in errors count characters.
pub fn parse(text: &str) -> Result<ExpressionTree> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        depth: 0,
    };
    let tree = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(tree)
}

/// `(value, ones)` of a witness expression.
pub fn verify(text: &str) -> Result<(BigUint, u64)> {
    let t = parse(text)?;
    Ok((t.value, t.ones))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_examples() {
        let two = ExpressionTree::sum(ExpressionTree::one(), ExpressionTree::one());
        let three = ExpressionTree::sum(ExpressionTree::one(), two.clone());
        let six = ExpressionTree::product(two.clone(), three);
        assert_eq!(six.render(), "(1+1)*(1+1+1)");
        assert_eq!(ExpressionTree::one().render(), "1");
        let seven = ExpressionTree::sum(ExpressionTree::one(), six.clone());
        assert_eq!(seven.render(), "1+(1+1)*(1+1+1)");
        let twelve = ExpressionTree::product(two, six);
        assert_eq!(twelve.render(), "(1+1)*((1+1)*(1+1+1))");
        assert_eq!(twelve.value(), &BigUint::from(12u8));
        assert_eq!(twelve.ones(), 7);
    }

    #[test]
    fn verify_examples() {
        assert_eq!(verify("(1+1)*(1+1+1)").unwrap(), (BigUint::from(6u8), 5));
        assert_eq!(verify("1").unwrap(), (BigUint::from(1u8), 1));
        assert_eq!(verify(" (1 + 1) · (1+1+1)\n").unwrap(), (BigUint::from(6u8), 5));
        assert_eq!(verify("(1+1)\\cdot (1+1)").unwrap(), (BigUint::from(4u8), 4));
        assert_eq!(verify("1+1*1+1").unwrap(), (BigUint::from(3u8), 4));
    }

    #[test]
    fn parse_errors_carry_positions() {
        for (text, pos) in [("", 0), ("1+", 2), ("(1+1", 4), ("1)", 1), ("2", 0), ("1+*1", 2)] {
            match parse(text) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, pos, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        let deep = "(".repeat(MAX_DEPTH + 1) + "1" + &")".repeat(MAX_DEPTH + 1);
        assert!(parse(&deep).is_err());
    }
}
