//! Line-oriented statements with a recursive-descent formula sub-parser.
//!
//! On a syntax error the parser records it and skips to the next line at
//! brace depth zero, so one pass reports every broken statement.

use std::collections::HashMap;

use super::lexer::{tokenize, Span, Tok, Token};
use super::{FamilyDecl, MeasureMode, MeasureStep, ParseError, Query, Scenario};
use crate::graph::VertexId;
use crate::modal::ModalFormula;
use crate::state::{Amplitude, EigenBranch, WaveFunction};

/// Formula nesting deeper than this is rejected.
pub const MAX_DEPTH: usize = 256;

/// Where names were written, indexed in parallel with the scenario's
/// sections, for resolve diagnostics.
#[derive(Debug, Default)]
pub(crate) struct Spans {
    pub states: Vec<Span>,
    pub branches: Vec<Vec<Span>>,
    pub measures: Vec<MeasureSpans>,
    pub families: Vec<(Span, Vec<Span>)>,
    pub queries: Vec<QuerySpans>,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct MeasureSpans {
    pub id: Span,
    pub state: Span,
    pub attach_step: Option<Span>,
    pub attach_label: Option<Span>,
    pub force: Option<Span>,
}

#[derive(Debug, Default, Clone)]
pub(crate) struct QuerySpans {
    pub name: Span,
    pub target: Option<Span>,
    pub labels: HashMap<String, Span>,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    errors: Vec<ParseError>,
    scenario: Scenario,
    spans: Spans,
    in_block: bool,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(src: &str) -> Self {
        Self {
            toks: tokenize(src),
            pos: 0,
            errors: Vec::new(),
            scenario: Scenario::default(),
            spans: Spans::default(),
            in_block: false,
        }
    }

    pub fn run(mut self) -> (Scenario, Spans, Vec<ParseError>) {
        loop {
            while self.at(&Tok::Newline) {
                self.pos += 1;
            }
            if self.at(&Tok::Eof) {
                break;
            }
            if let Err(e) = self.statement() {
                self.errors.push(e);
                self.recover();
            }
        }
        (self.scenario, self.spans, self.errors)
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(ParseError {
            line: t.span.line,
            column: t.span.column,
            found: found(t),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            depth_exceeded: false,
        })
    }

    fn expect(&mut self, t: Tok, name: &str) -> PResult<Token> {
        if self.at(&t) {
            Ok(self.bump())
        } else {
            self.error(&[name])
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            self.error(&[&format!("`{kw}`")])
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump().span))
            }
            _ => self.error(&[what]),
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline | Tok::Eof => {
                self.bump();
                Ok(())
            }
            _ => self.error(&["end of line"]),
        }
    }

    fn recover(&mut self) {
        let mut depth = i32::from(std::mem::take(&mut self.in_block));
        loop {
            match self.peek().tok {
                Tok::Eof => return,
                Tok::LBrace => depth += 1,
                Tok::RBrace => depth -= 1,
                Tok::Newline if depth <= 0 => {
                    self.bump();
                    return;
                }
                _ => {}
            }
            self.bump();
        }
    }

    fn statement(&mut self) -> PResult<()> {
        let kw = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return self.error(STATEMENTS),
        };
        match kw.as_str() {
            "state" => self.state()?,
            "measure" => self.measure()?,
            "family" => self.family()?,
            "query" => self.query()?,
            "verify" => {
                self.bump();
                let (name, span) = self.ident("state name")?;
                self.push_query(Query::Verify(name), span, None, HashMap::new());
            }
            "grade" => {
                self.bump();
                let (name, span) = self.ident("measurement id")?;
                self.push_query(Query::Grade(name), span, None, HashMap::new());
            }
            "axioms" => {
                let span = self.bump().span;
                self.push_query(Query::Axioms, span, None, HashMap::new());
            }
            _ => return self.error(STATEMENTS),
        }
        self.end_of_statement()
    }

    fn push_query(
        &mut self,
        q: Query,
        name: Span,
        target: Option<Span>,
        labels: HashMap<String, Span>,
    ) {
        self.scenario.queries.push(q);
        self.spans.queries.push(QuerySpans {
            name,
            target,
            labels,
        });
    }

    fn state(&mut self) -> PResult<()> {
        self.keyword("state")?;
        let (name, name_span) = self.ident("state name")?;
        self.expect(Tok::LBrace, "`{`")?;
        self.in_block = true;
        let mut branches = Vec::new();
        let mut spans = Vec::new();
        loop {
            while matches!(self.peek().tok, Tok::Newline | Tok::Semi) {
                self.bump();
            }
            if self.at(&Tok::RBrace) {
                self.bump();
                self.in_block = false;
                break;
            }
            let (label, span) = match &self.peek().tok {
                Tok::Ident(_) => self.ident("branch label")?,
                _ => return self.error(&["branch label", "`}`"]),
            };
            self.expect(Tok::Colon, "`:`")?;
            let amplitude = self.amplitude()?;
            self.expect(Tok::At, "`@`")?;
            let eigenvalue = self.real("eigenvalue")?;
            branches.push(EigenBranch::new(label, amplitude, eigenvalue));
            spans.push(span);
            match self.peek().tok {
                Tok::Semi | Tok::Newline | Tok::RBrace => {}
                _ => return self.error(&["`;`", "end of line", "`}`"]),
            }
        }
        self.scenario.states.push(WaveFunction::new(name, branches));
        self.spans.states.push(name_span);
        self.spans.branches.push(spans);
        Ok(())
    }

    fn sign(&mut self) -> f64 {
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        }
    }

    fn real(&mut self, what: &str) -> PResult<f64> {
        let s = self.sign();
        match self.peek().tok {
            Tok::Number(v, _) => {
                self.bump();
                Ok(s * v)
            }
            _ => self.error(&[what]),
        }
    }

    /// `[±]re [(+|-) im i]` or `[±]im i`.
    fn amplitude(&mut self) -> PResult<Amplitude> {
        let s = self.sign();
        match self.peek().tok {
            Tok::Imag(v) => {
                self.bump();
                Ok(Amplitude::new(0.0, s * v))
            }
            Tok::Number(v, _) => {
                self.bump();
                let re = s * v;
                let im_sign = match self.peek().tok {
                    Tok::Plus => 1.0,
                    Tok::Minus => -1.0,
                    _ => return Ok(Amplitude::real(re)),
                };
                self.bump();
                match self.peek().tok {
                    Tok::Imag(v) => {
                        self.bump();
                        Ok(Amplitude::new(re, im_sign * v))
                    }
                    _ => self.error(&["imaginary part"]),
                }
            }
            _ => self.error(&["amplitude"]),
        }
    }

    fn measure(&mut self) -> PResult<()> {
        self.keyword("measure")?;
        let mut spans = MeasureSpans::default();
        let (id, s) = self.ident("measurement id")?;
        spans.id = s;
        self.keyword("on")?;
        let (state, s) = self.ident("state name")?;
        spans.state = s;
        let attach = if self.at_keyword("at") {
            self.bump();
            let (step, s1) = self.ident("measurement id")?;
            self.expect(Tok::Colon, "`:`")?;
            let (label, s2) = self.ident("branch label")?;
            spans.attach_step = Some(s1);
            spans.attach_label = Some(s2);
            Some(VertexId::new(step, label))
        } else {
            None
        };
        let mode = if self.at_keyword("seed") {
            self.bump();
            match &self.peek().tok {
                Tok::Number(_, text) => match text.parse::<u64>() {
                    Ok(n) => {
                        self.bump();
                        MeasureMode::Seed(n)
                    }
                    Err(_) => return self.error(&["unsigned 64-bit seed"]),
                },
                _ => return self.error(&["unsigned 64-bit seed"]),
            }
        } else if self.at_keyword("force") {
            self.bump();
            let (label, s) = self.ident("branch label")?;
            spans.force = Some(s);
            MeasureMode::Force(label)
        } else if attach.is_none() {
            return self.error(&["`at`", "`seed`", "`force`"]);
        } else {
            return self.error(&["`seed`", "`force`"]);
        };
        self.scenario.script.push(MeasureStep {
            id,
            state,
            attach,
            mode,
        });
        self.spans.measures.push(spans);
        Ok(())
    }

    fn family(&mut self) -> PResult<()> {
        self.keyword("family")?;
        let (name, name_span) = self.ident("family name")?;
        self.expect(Tok::Eq, "`=`")?;
        self.expect(Tok::LBracket, "`[`")?;
        let mut members = Vec::new();
        let mut spans = Vec::new();
        if !self.at(&Tok::RBracket) {
            loop {
                let (m, s) = self.ident("state name")?;
                members.push(m);
                spans.push(s);
                match self.peek().tok {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::RBracket => break,
                    _ => return self.error(&["`,`", "`]`"]),
                }
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        self.scenario.families.push(FamilyDecl { name, members });
        self.spans.families.push((name_span, spans));
        Ok(())
    }

    fn query(&mut self) -> PResult<()> {
        self.keyword("query")?;
        let (name, name_span) = self.ident("query name")?;
        let family = if self.at_keyword("in") {
            self.bump();
            Some(self.ident("family name")?)
        } else {
            None
        };
        self.expect(Tok::Eq, "`=`")?;
        let mut labels = HashMap::new();
        let formula = self.formula(0, &mut labels)?;
        let target = family.as_ref().map(|(_, s)| *s);
        self.push_query(
            Query::Formula {
                name,
                family: family.map(|(f, _)| f),
                formula,
            },
            name_span,
            target,
            labels,
        );
        Ok(())
    }

    fn formula(
        &mut self,
        depth: usize,
        labels: &mut HashMap<String, Span>,
    ) -> PResult<ModalFormula> {
        if depth >= MAX_DEPTH {
            let t = self.peek();
            return Err(ParseError {
                line: t.span.line,
                column: t.span.column,
                found: found(t),
                expected: Vec::new(),
                depth_exceeded: true,
            });
        }
        let kw = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            Tok::LParen => {
                self.bump();
                let f = self.formula(depth + 1, labels)?;
                self.expect(Tok::RParen, "`)`")?;
                return Ok(f);
            }
            _ => return self.error(FORMULAS),
        };
        let unary = |f: ModalFormula| match kw.as_str() {
            "not" => f.not(),
            "pos" => f.possibly(),
            _ => f.necessarily(),
        };
        match kw.as_str() {
            "not" | "pos" | "nec" => {
                self.bump();
                let inner = self.formula(depth + 1, labels)?;
                Ok(unary(inner))
            }
            "atom" | "det" | "abs" => {
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let (label, span) = self.ident("branch label")?;
                self.expect(Tok::RParen, "`)`")?;
                labels.entry(label.clone()).or_insert(span);
                Ok(match kw.as_str() {
                    "atom" => ModalFormula::Atom(label),
                    "det" => ModalFormula::Det(label),
                    _ => ModalFormula::Abs(label),
                })
            }
            _ => self.error(FORMULAS),
        }
    }
}

/// The token as written, or a description for end of line / input.
fn found(t: &Token) -> String {
    if t.text.is_empty() {
        t.tok.to_string()
    } else {
        t.text.clone()
    }
}

const STATEMENTS: &[&str] = &[
    "`state`",
    "`measure`",
    "`family`",
    "`query`",
    "`verify`",
    "`grade`",
    "`axioms`",
];

const FORMULAS: &[&str] = &["`atom`", "`det`", "`abs`", "`not`", "`pos`", "`nec`", "`(`"];
