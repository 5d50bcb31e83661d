use std::fmt;

use super::term::{Choices, Kind, SessionType};

fn write_choices(f: &mut fmt::Formatter<'_>, choices: &Choices) -> fmt::Result {
    f.write_str("{")?;
    for (i, (l, t)) in choices.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}: {}", l, t)?;
    }
    f.write_str("}")
}

/// Concrete syntax: `end`, `t`, `rec t. T`, `+{l: T, ...}`, `&{l: T, ...}`;
/// annotated branchings print as `&@n{...}`.
impl fmt::Display for SessionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::End => f.write_str("end"),
            Kind::Var(v) => write!(f, "{}", v.name()),
            Kind::Rec(n, b) => write!(f, "rec {}. {}", n, b),
            Kind::Select(cs) => {
                f.write_str("+")?;
                write_choices(f, cs)
            }
            Kind::Branch(cs, a) => {
                f.write_str("&")?;
                if let Some(a) = a {
                    write!(f, "{}", a)?;
                }
                write_choices(f, cs)
            }
        }
    }
}

/// Renders a session type in concrete syntax.
pub fn render(t: &SessionType) -> String {
    t.to_string()
}
