use std::collections::HashMap;

use super::lexer::{tokenize, Tok, Token};
use super::{ActionTemplate, Arg, Condition, DslError, Pos, RuleSpec, SyntaxError};

/// Parses every rule in `text`, in document order. Any syntax error fails
/// the whole input.
pub fn parse_rules(text: &str) -> Result<Vec<RuleSpec>, DslError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, at: 0 };
    let mut rules = Vec::new();
    let mut seen: HashMap<String, Pos> = HashMap::new();
    while parser.peek() != &Tok::Eof {
        let rule = parser.rule()?;
        if seen.insert(rule.id.clone(), rule.pos).is_some() {
            return Err(DslError::DuplicateRuleId {
                id: rule.id,
                pos: rule.pos,
            });
        }
        rules.push(rule);
    }
    Ok(rules)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.at].clone();
        if token.tok != Tok::Eof {
            self.at += 1;
        }
        token
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let token = &self.tokens[self.at];
        SyntaxError {
            line: token.pos.line,
            col: token.pos.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: token.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, SyntaxError> {
        if *self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) => Ok((name, self.bump().pos)),
            _ => Err(self.error(&["IDENTIFIER"])),
        }
    }

    fn string(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Str(text) => {
                self.bump();
                Ok(text)
            }
            _ => Err(self.error(&["STRING"])),
        }
    }

    fn rule(&mut self) -> Result<RuleSpec, SyntaxError> {
        let pos = self.expect(Tok::Rule)?;
        let (id, _) = self.ident()?;
        let name = self.string()?;
        self.expect(Tok::Colon)?;
        self.expect(Tok::Condition)?;
        self.expect(Tok::Colon)?;
        let condition = self.or_expr()?;
        self.expect(Tok::Action)?;
        self.expect(Tok::Colon)?;
        self.expect(Tok::Report)?;
        let template = self.string()?;
        match self.peek() {
            Tok::Rule | Tok::Eof => {}
            _ => return Err(self.error(&["\"rule\"", "end of input"])),
        }
        Ok(RuleSpec {
            id,
            name,
            condition,
            action: ActionTemplate::new(&template),
            pos,
        })
    }

    fn or_expr(&mut self) -> Result<Condition, SyntaxError> {
        let mut left = self.and_expr()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let right = self.and_expr()?;
            left = Condition::or(left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Condition, SyntaxError> {
        let mut left = self.not_expr()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.not_expr()?;
            left = Condition::and(left, right);
        }
        Ok(left)
    }

    fn not_expr(&mut self) -> Result<Condition, SyntaxError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Condition::not(self.not_expr()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Condition, SyntaxError> {
        match self.peek().clone() {
            Tok::Exists => {
                let pos = self.bump().pos;
                let (var, _) = self.ident()?;
                self.expect(Tok::In)?;
                self.expect(Tok::Ast)?;
                self.expect(Tok::Colon)?;
                self.expect(Tok::LParen)?;
                let body = self.or_expr()?;
                self.expect(Tok::RParen)?;
                Ok(Condition::Exists {
                    var,
                    body: Box::new(body),
                    pos,
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.or_expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let pos = self.bump().pos;
                self.expect(Tok::LParen)?;
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.argument()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["\",\"", "\")\""]));
                }
                self.bump();
                Ok(Condition::Call { name, args, pos })
            }
            _ => Err(self.error(&["\"exists\"", "\"not\"", "\"(\"", "IDENTIFIER"])),
        }
    }

    fn argument(&mut self) -> Result<Arg, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Arg::Var(name))
            }
            Tok::Str(text) => {
                self.bump();
                Ok(Arg::Str(text))
            }
            _ => Err(self.error(&["IDENTIFIER", "STRING"])),
        }
    }
}
