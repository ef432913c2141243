namespace mapforge {}
