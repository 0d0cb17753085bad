use std::fmt;

use num_traits::{One, Signed};

use super::{Node, SmoothExpr};

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

/// Printer for the expression grammar with a chosen variable prefix.
pub struct ExprDisplay<'a> {
    expr: &'a SmoothExpr,
    prefix: &'a str,
}

impl<'a> ExprDisplay<'a> {
    pub(crate) fn new(expr: &'a SmoothExpr, prefix: &'a str) -> Self {
        ExprDisplay { expr, prefix }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.prefix, 0)
    }
}

fn negated_term(e: &SmoothExpr) -> SmoothExpr {
    match e.node() {
        Node::Const(c) => SmoothExpr::constant(-c.clone()),
        Node::Neg(a) => a.clone(),
        Node::Mul(v) => {
            let c = -v[0].as_const().expect("negative leading constant").clone();
            let mut rest: Vec<SmoothExpr> = v[1..].to_vec();
            if !c.is_one() {
                rest.insert(0, SmoothExpr::constant(c));
            }
            if rest.len() == 1 {
                rest.pop().expect("one factor")
            } else {
                SmoothExpr::mul_all(rest)
            }
        }
        _ => unreachable!("only called on terms with a negative coefficient"),
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &SmoothExpr, prefix: &str, ctx: u8) -> fmt::Result {
    match e.node() {
        Node::Const(c) => {
            if c.is_negative() && ctx > UNARY {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        Node::Pi => f.write_str("pi"),
        Node::Var(i) => write!(f, "{prefix}{}", i + 1),
        Node::Add(terms) => {
            if terms.is_empty() {
                return f.write_str("0");
            }
            let paren = ctx > SUM;
            if paren {
                f.write_str("(")?;
            }
            for (k, t) in terms.iter().enumerate() {
                if k == 0 {
                    write_expr(f, t, prefix, SUM)?;
                } else if t.has_negative_coefficient() {
                    f.write_str(" - ")?;
                    write_expr(f, &negated_term(t), prefix, PRODUCT)?;
                } else {
                    f.write_str(" + ")?;
                    write_expr(f, t, prefix, PRODUCT)?;
                }
            }
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        Node::Mul(factors) => {
            if factors.is_empty() {
                return f.write_str("1");
            }
            let leading_neg_one = factors[0].as_const().is_some_and(|c| (-c.clone()).is_one());
            let paren = ctx > PRODUCT || (leading_neg_one && ctx > UNARY);
            if paren {
                f.write_str("(")?;
            }
            let mut rest: &[SmoothExpr] = factors;
            if leading_neg_one && factors.len() > 1 {
                f.write_str("-")?;
                rest = &factors[1..];
            }
            for (k, t) in rest.iter().enumerate() {
                if k > 0 {
                    f.write_str("*")?;
                }
                let level = if k == 0 && rest.len() == factors.len() { UNARY } else { ATOM };
                write_expr(f, t, prefix, level)?;
            }
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        Node::Neg(a) => {
            let paren = ctx > UNARY;
            if paren {
                f.write_str("(")?;
            }
            f.write_str("-")?;
            write_expr(f, a, prefix, ATOM)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        Node::Pow(b, k) => {
            write_expr(f, b, prefix, ATOM)?;
            write!(f, "^{k}")
        }
        Node::Apply(p, a) => {
            write!(f, "{}(", p.name())?;
            write_expr(f, a, prefix, 0)?;
            f.write_str(")")
        }
        Node::Compose(g, args) => write_expr(f, &g.substitute(args), prefix, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn x(i: usize) -> SmoothExpr {
        SmoothExpr::var(i)
    }

    #[test]
    fn canonical_printing() {
        let e = parse("x2^2 + 2*x1*x2 + x1^2 - 1", 2).unwrap();
        assert_eq!(e.to_string(), "x1^2 + 2*x1*x2 + x2^2 - 1");
        let e = parse("x1 - 3*x2", 2).unwrap();
        assert_eq!(e.to_string(), "x1 - 3*x2");
        let e = parse("-x1", 1).unwrap();
        assert_eq!(e.to_string(), "-x1");
        let e = parse("1/2*sin(x1)^2 - x1", 1).unwrap();
        assert_eq!(e.to_string(), "1/2*sin(x1)^2 - x1");
        assert_eq!(parse("-3/4", 1).unwrap().to_string(), "-3/4");
    }

    #[test]
    fn prefix_is_respected() {
        let e = (SmoothExpr::int(2) * SmoothExpr::pi() * x(0)).cos().normalize();
        assert_eq!(e.display_with("t").to_string(), "cos(2*pi*t1)");
    }

    #[test]
    fn round_trips_on_samples() {
        for s in [
            "x1*x2 + sin(x1)",
            "recip(1 + x1^2) - 2*exp(-x2)",
            "rho0(x1^2 + x2^2)*cos(x1)",
            "(x1 + x2)^3 - x1",
            "-1/3*x1*x2^2 + 7/5",
            "rho0_2(x1) - pi",
        ] {
            let e = parse(s, 2).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed, 2).unwrap(), e, "{s} -> {printed}");
        }
    }
}
