//! Line-oriented circuit format.
//!
//! ```text
//! MODES 3
//! STATE 0 1 = 1.0 |a,-a> + 1.0 |-a,a>   # labels are linear in a
//! BPS 0 1
//! PHASE 2 pi/2
//! DISP 2 0.0 0.25
//! MEASURE 0 ODD
//! TARGET 1 2 = 1 |0.7071a,0>
//! ```

use std::collections::BTreeSet;
use std::fmt;

use abqt_core::{OutcomeClass, C64};

pub const MAX_MODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    UnknownKeyword,
    Arity,
    UndeclaredMode,
    Duplicate,
    Order,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// `scale * a + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub scale: C64,
    pub offset: C64,
}

impl Label {
    pub fn value(&self, alpha: f64) -> C64 {
        self.scale * alpha + self.offset
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub labels: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Modes(usize),
    State { modes: Vec<usize>, terms: Vec<Term> },
    Bps(usize, usize),
    Phase { mode: usize, psi: f64 },
    Disp { mode: usize, beta: C64 },
    Measure { mode: usize, class: OutcomeClass },
    Target { modes: Vec<usize>, terms: Vec<Term> },
}

/// Parsed statements and the source line of each. Equality ignores the lines.
#[derive(Debug, Clone, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
    pub lines: Vec<usize>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Program {
    pub fn mode_count(&self) -> Option<usize> {
        self.statements.iter().find_map(|s| match s {
            Statement::Modes(n) => Some(*n),
            _ => None,
        })
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn err(&self, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
        self.err_at(self.pos, kind, message)
    }

    fn err_at(&self, pos: usize, kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: self.line,
            column: pos + 1,
            kind,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &str) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else if self.at_end() {
            Err(self.err(DiagnosticKind::Arity, format!("missing {what}")))
        } else {
            Err(self.err(DiagnosticKind::Syntax, format!("expected {what}")))
        }
    }

    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn finish(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(DiagnosticKind::Arity, "unexpected extra argument"))
        }
    }

    fn index(&mut self, what: &str) -> PResult<usize> {
        if self.at_end() {
            return Err(self.err(DiagnosticKind::Arity, format!("missing {what}")));
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start || self.peek().is_some_and(|c| c.is_alphanumeric() || c == '.') {
            self.pos = start;
            return Err(self.err(
                DiagnosticKind::Syntax,
                format!("expected {what} (a non-negative integer)"),
            ));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| self.err_at(start, DiagnosticKind::Syntax, format!("{what} `{text}` is too large")))
    }

    /// Unsigned decimal literal with optional fraction and exponent.
    fn unsigned_number(&mut self) -> Option<PResult<f64>> {
        let start = self.pos;
        let digits = |c: &mut Self| {
            let s = c.pos;
            while c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
                c.pos += 1;
            }
            c.pos > s
        };
        let mut any = digits(self);
        if self.peek() == Some('.') {
            self.pos += 1;
            any |= digits(self);
        }
        if !any {
            self.pos = start;
            return None;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = save;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        Some(match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err_at(
                start,
                DiagnosticKind::Syntax,
                format!("number `{text}` is out of range"),
            )),
        })
    }

    fn sign(&mut self) -> Option<f64> {
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(1.0)
            }
            Some('-') => {
                self.pos += 1;
                Some(-1.0)
            }
            _ => None,
        }
    }

    fn real(&mut self, what: &str) -> PResult<f64> {
        if self.at_end() {
            return Err(self.err(DiagnosticKind::Arity, format!("missing {what}")));
        }
        let s = self.sign().unwrap_or(1.0);
        self.skip_ws();
        match self.unsigned_number() {
            Some(v) => Ok(s * v?),
            None => Err(self.err(DiagnosticKind::Syntax, format!("expected {what} (a number)"))),
        }
    }

    /// `[sign] [number] [*] [pi [/ number]]`.
    fn angle(&mut self) -> PResult<f64> {
        if self.at_end() {
            return Err(self.err(DiagnosticKind::Arity, "missing angle"));
        }
        let s = self.sign().unwrap_or(1.0);
        self.skip_ws();
        let start = self.pos;
        let num = self.unsigned_number().transpose()?;
        let star = self.eat('*');
        self.skip_ws();
        let has_pi = self.peek_word_is("pi");
        if has_pi {
            self.pos += 2;
        } else if star || num.is_none() {
            return Err(self.err_at(
                start,
                DiagnosticKind::Syntax,
                "expected an angle such as 0.5, pi or -pi/2",
            ));
        }
        let mut v = s * num.unwrap_or(1.0) * if has_pi { std::f64::consts::PI } else { 1.0 };
        if has_pi && self.eat('/') {
            self.skip_ws();
            let at = self.pos;
            let d = match self.unsigned_number() {
                Some(d) => d?,
                None => return Err(self.err(DiagnosticKind::Syntax, "expected a divisor")),
            };
            if d == 0.0 {
                return Err(self.err_at(at, DiagnosticKind::Syntax, "division by zero"));
            }
            v /= d;
        }
        Ok(v)
    }

    fn peek_word_is(&self, w: &str) -> bool {
        let n = w.chars().count();
        let matches = w
            .chars()
            .enumerate()
            .all(|(k, c)| self.peek_at(k).is_some_and(|x| x.eq_ignore_ascii_case(&c)));
        matches && !self.peek_at(n).is_some_and(|c| c.is_alphanumeric() || c == '_')
    }

    /// `atom (('+' | '-') atom)*` with atoms `number`, `[number]i`, `[number]a`, `[number]ia`.
    fn label(&mut self) -> PResult<Label> {
        let mut label = Label {
            scale: C64::new(0.0, 0.0),
            offset: C64::new(0.0, 0.0),
        };
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = match self.sign() {
                Some(s) => s,
                None if first => 1.0,
                None => break,
            };
            first = false;
            self.skip_ws();
            let start = self.pos;
            let num = self.unsigned_number().transpose()?;
            let imag = self.peek() == Some('i');
            if imag {
                self.pos += 1;
            }
            let has_a = self.peek() == Some('a');
            if has_a {
                self.pos += 1;
            }
            if num.is_none() && !imag && !has_a {
                return Err(self.err_at(
                    start,
                    DiagnosticKind::Syntax,
                    "expected a label such as a, -a, 0.5ia or 0",
                ));
            }
            if self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '.') {
                return Err(self.err(DiagnosticKind::Syntax, "unexpected character in label"));
            }
            let mut v = C64::new(sign * num.unwrap_or(1.0), 0.0);
            if imag {
                v *= C64::new(0.0, 1.0);
            }
            if has_a {
                label.scale += v;
            } else {
                label.offset += v;
            }
        }
        Ok(label)
    }

    fn ket(&mut self, width: usize) -> PResult<Vec<Label>> {
        let start = self.pos;
        self.expect('|', "`|` opening a ket")?;
        let mut labels = vec![self.label()?];
        while self.eat(',') {
            labels.push(self.label()?);
        }
        self.expect('>', "`>` closing the ket")?;
        if labels.len() != width {
            return Err(self.err_at(
                start,
                DiagnosticKind::Arity,
                format!("ket has {} labels for {width} modes", labels.len()),
            ));
        }
        Ok(labels)
    }

    fn terms(&mut self, width: usize) -> PResult<Vec<Term>> {
        let mut terms = Vec::new();
        loop {
            if self.at_end() {
                if terms.is_empty() {
                    return Err(self.err(DiagnosticKind::Arity, "missing term list"));
                }
                return Ok(terms);
            }
            let sign = match self.sign() {
                Some(s) => s,
                None if terms.is_empty() => 1.0,
                None => return Err(self.err(DiagnosticKind::Syntax, "expected `+` or `-` between terms")),
            };
            self.skip_ws();
            let coeff = match self.unsigned_number() {
                Some(v) => v?,
                None => 1.0,
            };
            self.skip_ws();
            let labels = self.ket(width)?;
            terms.push(Term {
                coeff: sign * coeff,
                labels,
            });
        }
    }
}

struct Checker {
    modes: Option<usize>,
    prepared: BTreeSet<usize>,
    measured: BTreeSet<usize>,
    gates_seen: bool,
    target_seen: bool,
}

impl Checker {
    fn mode(&self, c: &Cursor, at: usize, m: usize) -> PResult<usize> {
        match self.modes {
            Some(n) if m < n => Ok(m),
            Some(n) => Err(c.err_at(
                at,
                DiagnosticKind::UndeclaredMode,
                format!("mode {m} is not declared (MODES {n})"),
            )),
            None => Err(c.err_at(at, DiagnosticKind::Order, "MODES must be the first statement")),
        }
    }

    fn mode_arg(&self, c: &mut Cursor, what: &str) -> PResult<usize> {
        c.skip_ws();
        let at = c.pos;
        let m = c.index(what)?;
        self.mode(c, at, m)
    }

    fn live_mode(&self, c: &mut Cursor, what: &str) -> PResult<usize> {
        c.skip_ws();
        let at = c.pos;
        let m = self.mode_arg(c, what)?;
        if self.measured.contains(&m) {
            return Err(c.err_at(at, DiagnosticKind::Order, format!("mode {m} was already measured")));
        }
        Ok(m)
    }

    fn mode_list(&self, c: &mut Cursor) -> PResult<Vec<usize>> {
        let mut modes = Vec::new();
        loop {
            c.skip_ws();
            match c.peek() {
                Some('=') => break,
                None => return Err(c.err(DiagnosticKind::Arity, "missing `=` and term list")),
                _ => {}
            }
            let at = c.pos;
            let m = self.mode_arg(c, "mode")?;
            if modes.contains(&m) {
                return Err(c.err_at(at, DiagnosticKind::Duplicate, format!("mode {m} listed twice")));
            }
            modes.push(m);
        }
        if modes.is_empty() {
            return Err(c.err(DiagnosticKind::Arity, "expected at least one mode before `=`"));
        }
        c.pos += 1;
        Ok(modes)
    }

    fn statement(&mut self, c: &mut Cursor) -> PResult<Statement> {
        let kw_at = {
            c.skip_ws();
            c.pos
        };
        let Some(kw) = c.word() else {
            return Err(c.err(DiagnosticKind::Syntax, "expected a keyword"));
        };
        let kw = kw.to_ascii_uppercase();
        if kw != "MODES" && self.modes.is_none() {
            return Err(c.err_at(kw_at, DiagnosticKind::Order, "MODES must be the first statement"));
        }
        let stmt = match kw.as_str() {
            "MODES" => {
                if self.modes.is_some() {
                    return Err(c.err_at(kw_at, DiagnosticKind::Duplicate, "MODES may appear only once"));
                }
                c.skip_ws();
                let at = c.pos;
                let n = c.index("mode count")?;
                if n == 0 || n > MAX_MODES {
                    return Err(c.err_at(
                        at,
                        DiagnosticKind::Syntax,
                        format!("mode count must be 1..={MAX_MODES}"),
                    ));
                }
                c.finish()?;
                self.modes = Some(n);
                return Ok(Statement::Modes(n));
            }
            "STATE" => {
                if self.gates_seen {
                    return Err(c.err_at(
                        kw_at,
                        DiagnosticKind::Order,
                        "STATE must come before gates and measurements",
                    ));
                }
                c.skip_ws();
                let at = c.pos;
                let modes = self.mode_list(c)?;
                if let Some(m) = modes.iter().find(|m| self.prepared.contains(m)) {
                    return Err(c.err_at(at, DiagnosticKind::Duplicate, format!("mode {m} is already prepared")));
                }
                let terms = c.terms(modes.len())?;
                self.prepared.extend(&modes);
                Statement::State { modes, terms }
            }
            "TARGET" => {
                if self.target_seen {
                    return Err(c.err_at(kw_at, DiagnosticKind::Duplicate, "TARGET may appear only once"));
                }
                let modes = self.mode_list(c)?;
                let terms = c.terms(modes.len())?;
                self.target_seen = true;
                Statement::Target { modes, terms }
            }
            "BPS" => {
                let i = self.live_mode(c, "first mode")?;
                c.skip_ws();
                let at = c.pos;
                let j = self.live_mode(c, "second mode")?;
                if i == j {
                    return Err(c.err_at(at, DiagnosticKind::Duplicate, "beam splitter needs two distinct modes"));
                }
                self.gates_seen = true;
                Statement::Bps(i, j)
            }
            "PHASE" => {
                let mode = self.live_mode(c, "mode")?;
                let psi = c.angle()?;
                self.gates_seen = true;
                Statement::Phase { mode, psi }
            }
            "DISP" => {
                let mode = self.live_mode(c, "mode")?;
                let re = c.real("real part")?;
                let im = c.real("imaginary part")?;
                self.gates_seen = true;
                Statement::Disp {
                    mode,
                    beta: C64::new(re, im),
                }
            }
            "MEASURE" => {
                let mode = self.live_mode(c, "mode")?;
                c.skip_ws();
                let at = c.pos;
                let class = match c.word().map(|w| w.to_ascii_uppercase()).as_deref() {
                    Some("ZERO") => OutcomeClass::Zero,
                    Some("EVEN") => OutcomeClass::EvenNonzero,
                    Some("ODD") => OutcomeClass::Odd,
                    Some(_) => return Err(c.err_at(at, DiagnosticKind::Syntax, "expected ZERO, EVEN or ODD")),
                    None if c.at_end() => return Err(c.err(DiagnosticKind::Arity, "missing outcome class")),
                    None => return Err(c.err(DiagnosticKind::Syntax, "expected ZERO, EVEN or ODD")),
                };
                self.measured.insert(mode);
                self.gates_seen = true;
                Statement::Measure { mode, class }
            }
            other => {
                return Err(c.err_at(
                    kw_at,
                    DiagnosticKind::UnknownKeyword,
                    format!("unknown keyword `{other}`"),
                ));
            }
        };
        c.finish()?;
        Ok(stmt)
    }
}

/// Parses a whole program; every bad line contributes one diagnostic.
pub fn parse_circuit(text: &str) -> Result<Program, Vec<Diagnostic>> {
    let mut checker = Checker {
        modes: None,
        prepared: BTreeSet::new(),
        measured: BTreeSet::new(),
        gates_seen: false,
        target_seen: false,
    };
    let mut program = Program::default();
    let mut diagnostics = Vec::new();
    for (k, raw) in text.split('\n').enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(line, k + 1);
        match checker.statement(&mut c) {
            Ok(s) => {
                program.statements.push(s);
                program.lines.push(k + 1);
            }
            Err(d) => diagnostics.push(d),
        }
    }
    if diagnostics.is_empty() {
        Ok(program)
    } else {
        Err(diagnostics)
    }
}

fn fmt_component(f: &mut fmt::Formatter<'_>, first: bool, v: f64, suffix: &str) -> fmt::Result {
    if first {
        write!(f, "{v:?}{suffix}")
    } else if v.is_sign_negative() {
        write!(f, "-{:?}{suffix}", -v)
    } else {
        write!(f, "+{v:?}{suffix}")
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (self.scale.re, "a"),
            (self.scale.im, "ia"),
            (self.offset.re, ""),
            (self.offset.im, "i"),
        ];
        let mut first = true;
        for (v, suffix) in parts {
            if v != 0.0 {
                fmt_component(f, first, v, suffix)?;
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, modes: &[usize], terms: &[Term]) -> fmt::Result {
    for m in modes {
        write!(f, " {m}")?;
    }
    f.write_str(" =")?;
    for (k, t) in terms.iter().enumerate() {
        let labels: Vec<String> = t.labels.iter().map(Label::to_string).collect();
        let ket = labels.join(",");
        if k == 0 {
            write!(f, " {:?} |{ket}>", t.coeff)?;
        } else if t.coeff.is_sign_negative() {
            write!(f, " - {:?} |{ket}>", -t.coeff)?;
        } else {
            write!(f, " + {:?} |{ket}>", t.coeff)?;
        }
    }
    Ok(())
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Modes(n) => write!(f, "MODES {n}"),
            Statement::State { modes, terms } => {
                f.write_str("STATE")?;
                fmt_terms(f, modes, terms)
            }
            Statement::Target { modes, terms } => {
                f.write_str("TARGET")?;
                fmt_terms(f, modes, terms)
            }
            Statement::Bps(i, j) => write!(f, "BPS {i} {j}"),
            Statement::Phase { mode, psi } => write!(f, "PHASE {mode} {psi:?}"),
            Statement::Disp { mode, beta } => write!(f, "DISP {mode} {:?} {:?}", beta.re, beta.im),
            Statement::Measure { mode, class } => {
                let name = match class {
                    OutcomeClass::Zero => "ZERO",
                    OutcomeClass::EvenNonzero => "EVEN",
                    OutcomeClass::Odd => "ODD",
                };
                write!(f, "MEASURE {mode} {name}")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_error(text: &str) -> Diagnostic {
        parse_circuit(text).unwrap_err().remove(0)
    }

    #[test]
    fn three_statement_program() {
        let p = parse_circuit("MODES 2\nSTATE 0 1 = 1.0 |a,a> + 1.0 |-a,-a>\nBPS 0 1").unwrap();
        assert_eq!(p.statements.len(), 3);
        assert_eq!(p.lines, vec![1, 2, 3]);
        let Statement::State { terms, .. } = &p.statements[1] else {
            panic!()
        };
        assert_eq!(terms[1].labels[0].value(2.0), C64::new(-2.0, 0.0));
    }

    #[test]
    fn undeclared_mode() {
        let d = first_error("MODES 2\nBPS 0 7");
        assert_eq!((d.line, d.column, d.kind), (2, 7, DiagnosticKind::UndeclaredMode));
    }

    #[test]
    fn diagnostics_carry_locations() {
        let d = first_error("MODES 2\n  FOO 1");
        assert_eq!((d.line, d.column, d.kind), (2, 3, DiagnosticKind::UnknownKeyword));
        let d = first_error("MODES 2\nBPS 0");
        assert_eq!(d.kind, DiagnosticKind::Arity);
        let d = first_error("MODES 2\nPHASE 0 1 2");
        assert_eq!((d.kind, d.column), (DiagnosticKind::Arity, 11));
        let d = first_error("MODES 2\nSTATE 0 1 = |a>");
        assert_eq!((d.kind, d.column), (DiagnosticKind::Arity, 13));
        let d = first_error("BPS 0 1");
        assert_eq!(d.kind, DiagnosticKind::Order);
        let d = first_error("MODES 2\nMODES 3");
        assert_eq!(d.kind, DiagnosticKind::Duplicate);
        let d = first_error("MODES 2\nMEASURE 0 ODD\nPHASE 0 pi");
        assert_eq!((d.line, d.kind), (3, DiagnosticKind::Order));
        assert_eq!(parse_circuit("MODES 1\nX\nY").unwrap_err().len(), 2);
    }

    #[test]
    fn labels_angles_and_comments() {
        let p = parse_circuit(
            "# header\nMODES 2 # two modes\nSTATE 0 1 = -0.5 |0.5a+0.1i, -ia> - |0,2>\nPHASE 1 -pi/2\nPHASE 0 0.5*pi\nDISP 1 0 -1e-3\nMEASURE 0 even",
        )
        .unwrap();
        let Statement::State { terms, .. } = &p.statements[1] else {
            panic!()
        };
        assert_eq!(terms[0].coeff, -0.5);
        assert_eq!(terms[0].labels[0].value(1.0), C64::new(0.5, 0.1));
        assert_eq!(terms[0].labels[1].value(2.0), C64::new(0.0, -2.0));
        assert_eq!(terms[1].coeff, -1.0);
        assert_eq!(
            p.statements[2],
            Statement::Phase {
                mode: 1,
                psi: -std::f64::consts::FRAC_PI_2
            }
        );
        assert_eq!(
            p.statements[3],
            Statement::Phase {
                mode: 0,
                psi: std::f64::consts::FRAC_PI_2
            }
        );
        assert_eq!(
            p.statements[5],
            Statement::Measure {
                mode: 0,
                class: OutcomeClass::EvenNonzero
            }
        );
    }

    #[test]
    fn pretty_print_reparses() {
        let text = "MODES 3\nSTATE 0 1 = 0.6 |a,-a> - 0.8 |-0.5ia+1e-7,0>\nBPS 0 1\nDISP 2 0.25 -1.5\nMEASURE 1 ODD\nTARGET 2 0 = 1 |a,0.3i>";
        let p = parse_circuit(text).unwrap();
        let printed = p.to_string();
        assert_eq!(parse_circuit(&printed).unwrap(), p, "{printed}");
    }
}
