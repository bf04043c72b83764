use super::{Arg, Condition, RuleSpec};

const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const ATOM: u8 = 4;

/// Canonical text of a rule. Re-parsing the output yields an equal rule.
pub fn pretty_print(rule: &RuleSpec) -> String {
    let mut out = format!("rule {} {}:\n    condition:\n", rule.id, quote(&rule.name));
    match &rule.condition {
        Condition::Exists { var, body, .. } => {
            out.push_str(&format!("        exists {var} in AST: (\n"));
            out.push_str(&format!("            {}\n", print_condition(body)));
            out.push_str("        )\n");
        }
        other => out.push_str(&format!("        {}\n", print_condition(other))),
    }
    out.push_str(&format!("    action: report {}\n", quote(rule.action.raw())));
    out
}

/// Single-line form of a condition with the minimal parentheses needed to
/// preserve its tree shape.
pub fn print_condition(cond: &Condition) -> String {
    let mut out = String::new();
    write(cond, 0, &mut out);
    out
}

fn precedence(cond: &Condition) -> u8 {
    match cond {
        Condition::Or(..) => OR,
        Condition::And(..) => AND,
        Condition::Not(..) => NOT,
        Condition::Exists { .. } | Condition::Call { .. } => ATOM,
    }
}

fn write(cond: &Condition, min: u8, out: &mut String) {
    let wrap = precedence(cond) < min;
    if wrap {
        out.push('(');
    }
    match cond {
        Condition::Exists { var, body, .. } => {
            out.push_str(&format!("exists {var} in AST: ("));
            write(body, 0, out);
            out.push(')');
        }
        Condition::Not(inner) => {
            out.push_str("not ");
            write(inner, NOT, out);
        }
        Condition::And(a, b) => binary(a, b, "and", AND, out),
        Condition::Or(a, b) => binary(a, b, "or", OR, out),
        Condition::Call { name, args, .. } => {
            out.push_str(name);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                match arg {
                    Arg::Var(v) => out.push_str(v),
                    Arg::Str(s) => out.push_str(&quote(s)),
                }
            }
            out.push(')');
        }
    }
    if wrap {
        out.push(')');
    }
}

fn binary(a: &Condition, b: &Condition, op: &str, prec: u8, out: &mut String) {
    write(a, prec, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    // operators are left-associative, so a right operand of equal
    // precedence needs parentheses
    write(b, prec + 1, out);
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}
