int main() {
  char a[100];
  unsigned int b=0;
  printf("Enter text:");
  if(fgets(a,sizeof(a),stdin) != NULL) {
    while(b<10){
      printf("line\n");
      b++;
    }
  }
  else
    return 2;
  return 1+1+1;
}
